//! Variational computation of orbits of monotone twist maps.
//!
//! Orbits are critical points of discrete action sums `Σ h(x_i, x_{i+1})`.
//! The crate computes minimal segments, periodic minimizers, heteroclinic
//! kinks and multi-transition orbits by constrained minimization, and
//! certifies them through their stationarity residuals.
//!
//! Modules:
//! - [`genfun`]: generating functions, axiom checks, the induced map.
//! - [`config`]: configurations, action sums, residuals, predicates.
//! - [`minimize`]: chain solver, segments, periodic orbits, kinks, gap
//!   function, conjunction and lifting.
//! - [`transition`]: renormalized action and transition orbits.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod genfun;
pub mod minimize;
pub mod orbit;
pub mod scalar;
pub mod transition;

pub use config::{Configuration, NeighboringPair, PeriodicOrbit};
pub use error::{Error, Result};
pub use genfun::{FrenkelKontorova, GeneratingFunction, MapPoint, ModelSpec};
pub use minimize::{MinimizeOptions, SegmentSpec};
pub use orbit::{BlockReport, OrbitResult};
pub use transition::{TransitionResult, TransitionSpec};
