//! Bounded towers of definition for coherators.

mod enumerate;
mod tower;

pub use enumerate::{codomain_tables, TermEnumerator};
pub use tower::{
    build_tower, has_lifting, is_pseudo_coherator_up_to, Bounds, ExtensionTower, FibrancyReport, Flavor, Strategy,
    DEFAULT_CODOMAIN_LENGTH,
};
