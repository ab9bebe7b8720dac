//! Structural operations of weak ∞-groupoids as liftings of explicit pairs.

mod catalog;
mod provider;

pub use catalog::StructuralCatalog;
pub use provider::{FreeProvider, LiftingProvider, TowerProvider};
