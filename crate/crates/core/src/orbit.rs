use serde::{Deserialize, Serialize};

use crate::config::Configuration;

/// Per-block diagnostics of a transition orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub from: i64,
    pub to: i64,
    /// `"dwell"` or `"transition"`.
    pub kind: String,
    pub start_target: f64,
    pub end_target: f64,
    /// Block constant `c(j)`.
    pub weight: f64,
    /// `Σ (h(x_j, x_{j+1}) − c(j))` over the block.
    pub excess: f64,
    /// For dwell blocks, `max |x_i − target|` over the block.
    pub max_deviation: Option<f64>,
}

/// A computed orbit together with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub config: Configuration,
    /// Renormalized action of the window (`I` for kinks, `J` for transition
    /// orbits).
    pub value: f64,
    pub max_residual: f64,
    /// Indices (kinks) or turning labels (transition orbits) whose
    /// constraint is active.
    pub active_constraints: Vec<i64>,
    pub sweeps: usize,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_report: Option<Vec<BlockReport>>,
}

impl OrbitResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("orbit results are always serializable")
    }
}
