use thiserror::Error;

use crate::globes::Dim;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no globe map D_{src_dim} -> D_{tgt_dim} with that polarity")]
    InvalidGlobeMap { src_dim: Dim, tgt_dim: Dim },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: Dim, found: Dim },

    #[error("invalid table of dimensions: {0}")]
    InvalidTable(String),

    #[error("truncation {given} is below the required dimension {needed}")]
    Truncation { needed: Dim, given: Dim },

    #[error("operation needs a positive dimension")]
    ZeroDimensional,

    #[error("cell {dim}:{index} is out of range")]
    CellOutOfRange { dim: Dim, index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("ill-formed term: {0}")]
    IllFormed(String),

    #[error("unknown lifting symbol h#{0}")]
    UnknownSymbol(u32),

    #[error("not a pair of parallel arrows: {0}")]
    NotParallel(String),

    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),

    #[error("lifting provider failed on pair {0}")]
    ProviderFailure(String),

    #[error("coherence failure: pair {pair} evaluates to different cells on arguments {args:?}")]
    CoherenceFailure { pair: String, args: Vec<usize> },

    #[error("Segal condition violated by h#{symbol} at {args:?}: {reason}")]
    SegalViolation { symbol: u32, args: Vec<usize>, reason: String },

    #[error("arguments are not composable: {0}")]
    NotComposable(String),

    #[error("model has no operation table for h#{0}")]
    MissingTable(u32),

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Errors that report a mathematical outcome rather than malformed input.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotParallel(_)
                | Error::NotAdmissible(_)
                | Error::ProviderFailure(_)
                | Error::CoherenceFailure { .. }
                | Error::SegalViolation { .. }
                | Error::NotAMorphism(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
