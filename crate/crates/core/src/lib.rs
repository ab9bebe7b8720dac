pub mod error;
pub mod globes;
pub mod pasting;

pub use error::{Error, Result};
pub use globes::{compose_globe, hom_globes, Dim, GlobeMap, Polarity};
pub use pasting::{CellRef, GSMorphism, GlobularSet, Table};
pub mod coherators;
pub mod extensions;
pub mod models;
pub mod structural;
pub mod wfs;
