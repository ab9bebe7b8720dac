//! Towers as cellular objects: generating cofibrations, presentations,
//! fibrancy reports and maps into lifting providers.

mod cellular;
mod lift;

pub use cellular::{
    check_coherator_tower, omega_layering, pushout_layer, same_tower, Attachment, CellularPresentation,
    CoheratorReport, GenCofibration,
};
pub use lift::{lift_into, translate, Assignment, LiftTarget, SyntacticTarget};
