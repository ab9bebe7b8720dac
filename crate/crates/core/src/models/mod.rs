//! Finite models: globular sets with an operation table per lifting symbol.

mod build;
mod group;
mod homotopy;
mod model;

pub use build::{
    connected_group_carrier, connected_group_model, constant_carrier, constant_model, group_carrier, group_model,
    interpret, one_point_model, pull_back, ConstantRule, GroupRule, ModelTarget, OpRule,
};
pub use group::FiniteGroup;
pub use homotopy::{
    check_equivalence_relation, classes, homotopy_related, is_weak_equivalence, pi0, pi_n, varpi, GroupTable,
    ModelMorphism, PiGroupoid, WeqReport, Witnesses,
};
pub use model::{check_segal, interpretable, is_segal, Model, OpTable};
