//! Constrained minimization of action sums.

mod chain;
mod conjunction;
mod hetero;
mod periodic;
mod phi;
mod segment;

pub use conjunction::{build_h, conjunction, lift_configuration, ReducedGeneratingFunction};
pub use hetero::{
    gap_levels, minimize_heteroclinic, window_drift, Direction, HeteroclinicResult, LevelReport,
    WindowDrift,
};
pub use periodic::{c_level, diagonal_min_gap, find_neighboring_pair, find_periodic_minimizer};
pub use phi::{phi_estimate, phi_ladder};
pub use segment::{minimize_segment, segment_multistart_spread, SegmentSpec};

pub(crate) use chain::{linear_init, ChainProblem, Closure};
pub(crate) use segment::{best_of as best_of_chain, kink_profile, minimize_segment_seeded};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Solver options shared by every minimization routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeOptions {
    /// Bound on the last sweep's coordinate change; residuals must reach
    /// `10·tol`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Number of initial iterates tried; `1` uses the deterministic default
    /// initialization only.
    pub multistart: usize,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            tol: 1e-10,
            max_sweeps: 100_000,
            multistart: 1,
            seed: 0,
        }
    }
}

impl MinimizeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::Invalid(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Invalid("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}
