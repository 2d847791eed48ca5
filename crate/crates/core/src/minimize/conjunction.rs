//! Conjunction of generating functions and the reduced function
//! `H(ξ, ξ′) = h^{*q}(ξ, ξ′ + p)` used for rational rotation numbers.

use super::{minimize_segment, MinimizeOptions, SegmentSpec};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::scalar::{minimize_bracketed, ScalarMin};

const CONJUNCTION_SCAN: usize = 200;

/// `min_ξ h1(x1, ξ) + h2(ξ, x2)` and its minimizer.
///
/// The default bracket is `[min(x1,x2) − 2, max(x1,x2) + 2]`. A minimizer on
/// the bracket edge triggers one doubling of the bracket about its center;
/// a second edge hit is an error.
pub fn conjunction<G1, G2>(
    h1: &G1,
    h2: &G2,
    x1: f64,
    x2: f64,
    bracket: Option<(f64, f64)>,
) -> Result<ScalarMin>
where
    G1: GeneratingFunction + ?Sized,
    G2: GeneratingFunction + ?Sized,
{
    if !x1.is_finite() || !x2.is_finite() {
        return Err(Error::Domain("conjunction endpoints must be finite".into()));
    }
    let (lo, hi) = bracket.unwrap_or((x1.min(x2) - 2.0, x1.max(x2) + 2.0));
    if !(lo < hi) {
        return Err(Error::Invalid(format!("empty bracket [{lo}, {hi}]")));
    }
    let f = |t: f64| h1.eval(x1, t) + h2.eval(t, x2);
    let df = |t: f64| {
        let a = h1.second_partials(x1, t);
        let b = h2.second_partials(t, x2);
        (h1.partials(x1, t).1 + h2.partials(t, x2).0, a.d22 + b.d11)
    };
    match minimize_bracketed(f, df, lo, hi, CONJUNCTION_SCAN) {
        Err(Error::BracketEdge { .. }) => {
            let mid = 0.5 * (lo + hi);
            let r = hi - lo;
            minimize_bracketed(f, df, mid - r, mid + r, CONJUNCTION_SCAN)
        }
        other => other,
    }
}

/// `H(ξ, ξ′)`: the minimal action of `q` links from `ξ` to `ξ′ + p`.
///
/// Partial derivatives come from the envelope theorem at the minimizing
/// segment: `∂₁H = ∂₁h(x_0, x_1)` and `∂₂H = ∂₂h(x_{q−1}, x_q)`. Solver failures
/// evaluate to NaN.
pub struct ReducedGeneratingFunction<'a, G: ?Sized> {
    pub h: &'a G,
    pub q: usize,
    pub p: i64,
    pub opts: MinimizeOptions,
}

impl<G: GeneratingFunction + ?Sized> ReducedGeneratingFunction<'_, G> {
    /// The minimizing segment from `ξ` to `ξ′ + p` and its action.
    pub fn segment(&self, xi: f64, xi_prime: f64) -> Result<(Configuration, f64)> {
        let spec = SegmentSpec::new(self.q, xi, xi_prime + self.p as f64);
        minimize_segment(self.h, &spec, &self.opts)
    }
}

impl<G: GeneratingFunction + ?Sized> GeneratingFunction for ReducedGeneratingFunction<'_, G> {
    fn eval(&self, xi: f64, eta: f64) -> f64 {
        if self.q == 1 {
            return self.h.eval(xi, eta + self.p as f64);
        }
        self.segment(xi, eta).map(|(_, v)| v).unwrap_or(f64::NAN)
    }

    fn partials(&self, xi: f64, eta: f64) -> (f64, f64) {
        if self.q == 1 {
            return self.h.partials(xi, eta + self.p as f64);
        }
        match self.segment(xi, eta) {
            Ok((c, _)) => {
                let x = &c.values;
                let n = x.len();
                (
                    self.h.partials(x[0], x[1]).0,
                    self.h.partials(x[n - 2], x[n - 1]).1,
                )
            }
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

pub fn build_h<'a, G: GeneratingFunction + ?Sized>(
    h: &'a G,
    q: usize,
    p: i64,
    opts: &MinimizeOptions,
) -> Result<ReducedGeneratingFunction<'a, G>> {
    if q == 0 {
        return Err(Error::Invalid("q must be at least 1".into()));
    }
    opts.validate()?;
    Ok(ReducedGeneratingFunction {
        h,
        q,
        p,
        opts: *opts,
    })
}

/// Lift a configuration of the reduced problem: `x_{iq} = y_i + ip`, with each
/// block `x_{iq..=(i+1)q}` the minimal segment realizing `H(y_i, y_{i+1})`.
pub fn lift_configuration<G: GeneratingFunction + ?Sized>(
    y: &Configuration,
    h: &G,
    q: usize,
    p: i64,
    opts: &MinimizeOptions,
) -> Result<Configuration> {
    if q == 0 {
        return Err(Error::Invalid("q must be at least 1".into()));
    }
    let base = |i: i64| y.at(i) + (i * p) as f64;
    let mut values = vec![base(y.start)];
    for i in y.start..y.end() {
        let (a, b) = (base(i), base(i + 1));
        if q == 1 {
            values.push(b);
            continue;
        }
        let (seg, _) = minimize_segment(h, &SegmentSpec::new(q, a, b), opts)?;
        values.extend_from_slice(&seg.values[1..]);
    }
    Configuration::new(y.start * q as i64, values)
}
