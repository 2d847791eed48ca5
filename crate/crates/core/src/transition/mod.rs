//! Multi-transition orbits from the renormalized action `J` on a truncated
//! window, with certification that no constraint is active.

mod family;
mod renorm;
mod solve;
mod spec;

pub use family::{
    enumerate_orbit_family, family_spec, select_turns, FamilyMember, FamilyReport, DISTINCT_GAP,
};
pub use renorm::{
    broken_configuration, compute_block_constants, renorm_action_j, Block, RenormWeights,
};
pub use solve::{
    minimize_transition, minimize_transition_auto, spacing_threshold, AutoSpacing, SpacingSearch,
    TransitionResult, ACTIVE_TOL, CERT_RESIDUAL,
};
pub use spec::{build_one_sided_spec, mod4_upper, one_sided_target, Pattern, TransitionSpec, Turn};
