//! Generating functions of monotone twist maps.
//!
//! A generating function `h(ξ, η)` encodes a twist map through
//! `dh = Y dX − y dx`. With the convention used throughout this crate,
//!
//! ```text
//! y_i     = −∂₁h(x_i, x_{i+1})
//! y_{i+1} =  ∂₂h(x_i, x_{i+1})
//! ```
//!
//! so a configuration is an orbit exactly when
//! `∂₂h(x_{i−1}, x_i) + ∂₁h(x_i, x_{i+1}) = 0` at every index.

mod axioms;
mod dynamics;
mod fk;
mod model;

pub use axioms::{
    check_axioms, estimate_lipschitz, quadrangle_margin, AxiomCheck, AxiomOptions, AxiomReport,
};
pub use dynamics::{induced_map, induced_map_auto, induced_map_jacobian, MapPoint};
pub use fk::{FrenkelKontorova, Potential};
pub use model::{FnGeneratingFunction, ModelSpec};

use crate::error::{Error, Result};

/// Central-difference step for first partials.
pub const FD_STEP: f64 = 1e-5;
/// Central-difference step for second partials.
pub const FD_STEP_2: f64 = 1e-4;

/// Second partial derivatives of `h` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondPartials {
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

/// A generating function `h(ξ, η)` together with its derivatives.
///
/// Only [`eval`](GeneratingFunction::eval) is required; derivatives fall
/// back to central differences.
pub trait GeneratingFunction: Send + Sync {
    fn eval(&self, xi: f64, eta: f64) -> f64;

    fn partials(&self, xi: f64, eta: f64) -> (f64, f64) {
        let s = FD_STEP;
        (
            (self.eval(xi + s, eta) - self.eval(xi - s, eta)) / (2.0 * s),
            (self.eval(xi, eta + s) - self.eval(xi, eta - s)) / (2.0 * s),
        )
    }

    fn second_partials(&self, xi: f64, eta: f64) -> SecondPartials {
        let s = FD_STEP_2;
        let f = |a: f64, b: f64| self.eval(a, b);
        let c = f(xi, eta);
        SecondPartials {
            d11: (f(xi + s, eta) - 2.0 * c + f(xi - s, eta)) / (s * s),
            d12: (f(xi + s, eta + s) - f(xi + s, eta - s) - f(xi - s, eta + s)
                + f(xi - s, eta - s))
                / (4.0 * s * s),
            d22: (f(xi, eta + s) - 2.0 * c + f(xi, eta - s)) / (s * s),
        }
    }

    /// Analytic twist constant `δ` with `∂₁∂₂h ≤ −δ`, if known.
    fn twist_bound(&self) -> Option<f64> {
        None
    }

    /// Whether `h(x, y) = h(y, x)` holds identically.
    fn is_symmetric(&self) -> bool {
        false
    }
}

impl<T: GeneratingFunction + ?Sized> GeneratingFunction for &T {
    fn eval(&self, xi: f64, eta: f64) -> f64 {
        (**self).eval(xi, eta)
    }
    fn partials(&self, xi: f64, eta: f64) -> (f64, f64) {
        (**self).partials(xi, eta)
    }
    fn second_partials(&self, xi: f64, eta: f64) -> SecondPartials {
        (**self).second_partials(xi, eta)
    }
    fn twist_bound(&self) -> Option<f64> {
        (**self).twist_bound()
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

impl<T: GeneratingFunction + ?Sized> GeneratingFunction for Box<T> {
    fn eval(&self, xi: f64, eta: f64) -> f64 {
        (**self).eval(xi, eta)
    }
    fn partials(&self, xi: f64, eta: f64) -> (f64, f64) {
        (**self).partials(xi, eta)
    }
    fn second_partials(&self, xi: f64, eta: f64) -> SecondPartials {
        (**self).second_partials(xi, eta)
    }
    fn twist_bound(&self) -> Option<f64> {
        (**self).twist_bound()
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

fn check_finite(xi: f64, eta: f64) -> Result<()> {
    if xi.is_finite() && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument ({xi}, {eta})")))
    }
}

/// Checked evaluation of `h(ξ, η)`.
pub fn eval_h<G: GeneratingFunction + ?Sized>(h: &G, xi: f64, eta: f64) -> Result<f64> {
    check_finite(xi, eta)?;
    Ok(h.eval(xi, eta))
}

/// Checked evaluation of `(∂₁h, ∂₂h)`.
pub fn eval_partials<G: GeneratingFunction + ?Sized>(
    h: &G,
    xi: f64,
    eta: f64,
) -> Result<(f64, f64)> {
    check_finite(xi, eta)?;
    let p = h.partials(xi, eta);
    if p.0.is_finite() && p.1.is_finite() {
        Ok(p)
    } else {
        Err(Error::Numeric(format!(
            "partials not finite at ({xi}, {eta})"
        )))
    }
}

/// Central-difference partials with an explicit step.
///
/// Fails when the step is lost to rounding at the evaluation point.
pub fn fd_partials<G: GeneratingFunction + ?Sized>(
    h: &G,
    xi: f64,
    eta: f64,
    step: f64,
) -> Result<(f64, f64)> {
    check_finite(xi, eta)?;
    if !(step > 0.0) || xi + step == xi || eta + step == eta {
        return Err(Error::Numeric(format!(
            "finite-difference step {step:e} underflows at ({xi}, {eta})"
        )));
    }
    Ok((
        (h.eval(xi + step, eta) - h.eval(xi - step, eta)) / (2.0 * step),
        (h.eval(xi, eta + step) - h.eval(xi, eta - step)) / (2.0 * step),
    ))
}
