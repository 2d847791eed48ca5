//! One-dimensional minimization and root finding.
//!
//! Every coordinate update in the chain solvers and every conjunction
//! evaluation reduces to one of the routines here.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while (hi - lo).abs() > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // the interior probes can beat the midpoint on very flat functions
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Safeguarded Newton iteration for a root of `g` inside `[lo, hi]`.
///
/// `g` returns the value and derivative. The bracket must carry a sign
/// change; the iterate falls back to bisection whenever Newton leaves the
/// current bracket or stalls.
pub fn find_root<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> (f64, f64),
{
    let (glo, _) = g(lo);
    let (ghi, _) = g(hi);
    if !glo.is_finite() || !ghi.is_finite() {
        return Err(Error::Numeric(
            "root function not finite at bracket ends".into(),
        ));
    }
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() {
        return Err(Error::RootNotFound { lo, hi });
    }
    // orient so that g(a) < 0 < g(b)
    let (mut a, mut b) = if glo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut last_step = (hi - lo).abs();
    for _ in 0..200 {
        let (gx, dgx) = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let newton = if dgx != 0.0 { x - gx / dgx } else { f64::NAN };
        let (mn, mx) = if a < b { (a, b) } else { (b, a) };
        let step;
        if newton.is_finite() && newton > mn && newton < mx && (newton - x).abs() < 0.5 * last_step
        {
            step = newton - x;
            x = newton;
        } else {
            let mid = 0.5 * (a + b);
            step = mid - x;
            x = mid;
        }
        last_step = step.abs();
        if last_step <= tol * (1.0 + x.abs()) || (b - a).abs() <= tol {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Result of a bracketed scalar minimization.
#[derive(Debug, Clone, Copy)]
pub struct ScalarMin {
    pub x: f64,
    pub value: f64,
}

/// Minimize `f` over `[lo, hi]` by a coarse scan followed by golden-section
/// refinement and a Newton polish on the derivative.
///
/// `df` returns `(f'(x), f''(x))`. Fails with [`Error::BracketEdge`] when the
/// best point lies on the bracket boundary.
pub fn minimize_bracketed<F, D>(f: F, df: D, lo: f64, hi: f64, scan: usize) -> Result<ScalarMin>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> (f64, f64),
{
    let scan = scan.max(3);
    let step = (hi - lo) / scan as f64;
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for i in 0..=scan {
        let v = f(lo + step * i as f64);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    if !best_val.is_finite() {
        return Err(Error::Numeric(
            "objective not finite on the scan grid".into(),
        ));
    }
    if best == 0 || best == scan {
        return Err(Error::BracketEdge { lo, hi });
    }
    let cell_lo = lo + step * (best - 1) as f64;
    let cell_hi = lo + step * (best + 1) as f64;
    let (xg, _) = golden_section(&f, cell_lo, cell_hi, 1e-9 * (1.0 + step));
    // polish on the stationarity condition when the derivative brackets a root
    let x = match find_root(
        &df,
        (xg - 1e-6).max(cell_lo),
        (xg + 1e-6).min(cell_hi),
        1e-15,
    ) {
        // values agree to rounding near a minimum, so compare with slack
        Ok(r) if f(r) <= f(xg) + 8.0 * f64::EPSILON * (1.0 + f(xg).abs()) => r,
        _ => xg,
    };
    Ok(ScalarMin { x, value: f(x) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2), -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx < 1e-16);
    }

    #[test]
    fn root_of_cubic() {
        let r = find_root(|x| (x * x * x - 2.0, 3.0 * x * x), 0.0, 3.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn root_requires_sign_change() {
        let err = find_root(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::RootNotFound { .. }));
    }

    #[test]
    fn bracket_edge_detected() {
        let err = minimize_bracketed(|x| x, |_| (1.0, 0.0), 0.0, 1.0, 16).unwrap_err();
        assert!(matches!(err, Error::BracketEdge { .. }));
    }

    #[test]
    fn bracketed_min_is_polished() {
        let m = minimize_bracketed(
            |x: f64| (2.0 * std::f64::consts::PI * x).cos(),
            |x: f64| {
                let w = 2.0 * std::f64::consts::PI;
                (-w * (w * x).sin(), -w * w * (w * x).cos())
            },
            0.1,
            0.9,
            32,
        )
        .unwrap();
        assert!((m.x - 0.5).abs() < 1e-12);
    }
}
