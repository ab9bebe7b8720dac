//! Arrows of free globular extensions of `Θ₀`: terms, their normal forms,
//! parallel pairs and the formal adjunction of liftings.

mod algebraic;
mod normal;
mod signature;
mod sum;
mod term;

pub use algebraic::{algebraic_decompose, factor_through, is_admissible, is_algebraic, support};
pub use normal::{boundary_of, check_compatible, equal, make_parallel_pair, normalize, precompose, subst};
pub use signature::{ExtensionLevel, LiftingSymbol, ParallelPair, Signature};
pub use sum::SumArrow;
pub use term::{SymbolId, Term};

use std::sync::Arc;

use crate::globes::{Dim, GlobeMap};
use crate::pasting::{realization, Table};

/// The identity of `D_i` as a term.
pub fn disk_identity(i: Dim) -> Term {
    Term::glob(&Arc::new(Table::disk(i)), realization(&Table::disk(i)).top(0))
}

/// A globe map `D_i -> D_j` as a term.
pub fn globe_term(g: &GlobeMap) -> Term {
    SumArrow::globe(g).into_term().expect("disk-shaped")
}

/// A lifting symbol applied to the identity of its codomain.
pub fn symbol_term(sig: &Signature, id: SymbolId) -> crate::Result<Term> {
    let s = sig.get(id)?;
    Ok(Term::lift(id, SumArrow::identity(s.codomain()).comps().to_vec(), s.out_dim()))
}
