//! Sampled checks of the standing hypotheses on `h`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GeneratingFunction;

/// Outcome of one sampled check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// Worst observed margin; its meaning depends on the check.
    pub margin: f64,
    /// Checks with `required == false` are reported but do not fail the suite.
    pub required: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
    pub twist_delta: f64,
    pub lipschitz_c: f64,
    pub convexity_theta: f64,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.required && !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomOptions {
    /// Largest `|η|` used for the growth check.
    pub growth_horizon: f64,
    /// Sampling box for `(ξ, η)` is `[lo, hi]²`.
    pub lo: f64,
    pub hi: f64,
    /// Range used for the Lipschitz estimate is `[0,1] × [u⁰−1, u¹+1]`.
    pub pair: (f64, f64),
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            growth_horizon: 50.0,
            lo: -1.0,
            hi: 2.0,
            pair: (0.0, 1.0),
        }
    }
}

/// `h(ξ, η̄) + h(ξ̄, η) − h(ξ, η) − h(ξ̄, η̄)`; positive when the strict
/// quadrangle inequality holds for `ξ < ξ̄`, `η < η̄`.
pub fn quadrangle_margin<G: GeneratingFunction + ?Sized>(
    h: &G,
    xi: f64,
    xi_bar: f64,
    eta: f64,
    eta_bar: f64,
) -> f64 {
    (h.eval(xi, eta_bar) + h.eval(xi_bar, eta)) - (h.eval(xi, eta) + h.eval(xi_bar, eta_bar))
}

/// Lipschitz constant over `[0,1] × [u⁰−1, u¹+1]`: the largest sampled
/// `|∂₁h|`, `|∂₂h|` plus a 10% margin.
pub fn estimate_lipschitz<G: GeneratingFunction + ?Sized>(h: &G, u0: f64, u1: f64) -> f64 {
    let n = 64;
    let mut best = 0.0f64;
    for i in 0..=n {
        let xi = i as f64 / n as f64;
        for j in 0..=n {
            let eta = (u0 - 1.0) + (u1 - u0 + 2.0) * j as f64 / n as f64;
            let (a, b) = h.partials(xi, eta);
            let (c, d) = h.partials(eta, xi);
            best = best.max(a.abs()).max(b.abs()).max(c.abs()).max(d.abs());
        }
    }
    1.1 * best
}

fn ordered_pair(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (f64, f64) {
    loop {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        if a < b {
            return (a, b);
        } else if b < a {
            return (b, a);
        }
    }
}

/// Sampled report on periodicity, growth, the quadrangle inequality, the
/// twist bound, symmetry, the Lipschitz bound and the convexity modulus.
pub fn check_axioms<G: GeneratingFunction + ?Sized>(
    h: &G,
    samples: usize,
    seed: u64,
    opts: &AxiomOptions,
) -> AxiomReport {
    let samples = samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (opts.lo, opts.hi);
    let mut checks = Vec::new();

    // periodicity
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = rng.gen_range(lo..hi);
        let eta = rng.gen_range(lo..hi);
        worst = worst.max((h.eval(xi + 1.0, eta + 1.0) - h.eval(xi, eta)).abs());
    }
    checks.push(AxiomCheck {
        name: "h1".into(),
        passed: worst <= 1e-12,
        margin: worst,
        required: true,
        detail: format!("max |h(ξ+1,η+1) − h(ξ,η)| = {worst:.3e}"),
    });

    // growth, sampled up to the horizon
    let horizon = opts.growth_horizon;
    let mut min_slope = f64::INFINITY;
    for _ in 0..samples {
        let xi = rng.gen_range(0.0..1.0);
        let base = (-10..=10)
            .map(|j| h.eval(xi, xi + j as f64 / 10.0))
            .fold(f64::NEG_INFINITY, f64::max);
        for sign in [-1.0, 1.0] {
            let far = h.eval(xi, xi + sign * horizon);
            min_slope = min_slope.min((far - base) / horizon);
        }
    }
    checks.push(AxiomCheck {
        name: "h2".into(),
        passed: min_slope > 0.0,
        margin: min_slope,
        required: true,
        detail: format!("minimum slope of h(ξ,ξ+η) out to |η| = {horizon}: {min_slope:.3e}"),
    });

    // strict quadrangle inequality
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let (xi, xi_bar) = ordered_pair(&mut rng, lo, hi);
        let (eta, eta_bar) = ordered_pair(&mut rng, lo, hi);
        worst = worst.min(quadrangle_margin(h, xi, xi_bar, eta, eta_bar));
    }
    checks.push(AxiomCheck {
        name: "h3".into(),
        passed: worst > 0.0,
        margin: worst,
        required: true,
        detail: format!("min quadrangle margin {worst:.3e}"),
    });

    // cross-partial bound, which also gives (h5) with constant density δ
    let mut max_cross = f64::NEG_INFINITY;
    let mut theta = f64::NEG_INFINITY;
    for _ in 0..samples {
        let xi = rng.gen_range(lo..hi);
        let eta = rng.gen_range(lo..hi);
        let s = h.second_partials(xi, eta);
        max_cross = max_cross.max(s.d12);
        theta = theta.max(s.d11).max(s.d22);
    }
    let twist_delta = -max_cross;
    checks.push(AxiomCheck {
        name: "twist".into(),
        passed: twist_delta > 0.0,
        margin: twist_delta,
        required: true,
        detail: format!("max ∂₁∂₂h = {max_cross:.9}"),
    });

    // convexity modulus: θ ≥ sup ∂₁₁h, ∂₂₂h; only reported
    let convexity_theta = theta.max(0.0) * 1.1 + 1e-12;
    checks.push(AxiomCheck {
        name: "h6".into(),
        passed: theta.is_finite(),
        margin: convexity_theta,
        required: false,
        detail: format!("θ estimate {convexity_theta:.6}"),
    });

    // symmetry
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = rng.gen_range(lo..hi);
        let y = rng.gen_range(lo..hi);
        worst = worst.max((h.eval(x, y) - h.eval(y, x)).abs());
    }
    checks.push(AxiomCheck {
        name: "rev".into(),
        passed: worst == 0.0,
        margin: worst,
        required: false,
        detail: format!("max |h(x,y) − h(y,x)| = {worst:.3e}"),
    });

    // Lipschitz bound on sampled pairs inside the estimation box
    let (u0, u1) = opts.pair;
    let lipschitz_c = estimate_lipschitz(h, u0, u1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let xi = rng.gen_range(0.0..1.0);
        let e1 = rng.gen_range(u0 - 1.0..u1 + 1.0);
        let e2 = rng.gen_range(u0 - 1.0..u1 + 1.0);
        let gap = (e1 - e2).abs();
        worst = worst.max((h.eval(xi, e1) - h.eval(xi, e2)).abs() - lipschitz_c * gap);
        worst = worst.max((h.eval(e1, xi) - h.eval(e2, xi)).abs() - lipschitz_c * gap);
    }
    checks.push(AxiomCheck {
        name: "lipschitz".into(),
        passed: worst <= 1e-12,
        margin: worst,
        required: true,
        detail: format!("C = {lipschitz_c:.6}, worst excess {worst:.3e}"),
    });

    AxiomReport {
        samples,
        seed,
        checks,
        twist_delta,
        lipschitz_c,
        convexity_theta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{FnGeneratingFunction, FrenkelKontorova};

    #[test]
    fn fk_passes_everything() {
        let h = FrenkelKontorova::new(1.0, 1.0).unwrap();
        let r = check_axioms(&h, 1000, 7, &AxiomOptions::default());
        assert!(r.all_passed(), "{r:#?}");
        assert!(r.twist_delta >= 0.999);
        assert!(r.check("rev").unwrap().passed);
        assert!(r.check("h1").unwrap().margin < 1e-15);
    }

    #[test]
    fn concave_coupling_fails_quadrangle() {
        let h = FnGeneratingFunction::new(|x: f64, y: f64| -(x - y) * (x - y));
        // one explicit quadruple: ξ=0, ξ̄=1, η=0, η̄=1 gives margin −2
        assert_eq!(quadrangle_margin(&h, 0.0, 1.0, 0.0, 1.0), -2.0);
        let r = check_axioms(&h, 200, 3, &AxiomOptions::default());
        assert!(!r.all_passed());
        assert!(r.failed().contains(&"h3"));
    }

    #[test]
    fn free_quadratic_margin_is_exact() {
        let kappa = 1.0;
        let h = FrenkelKontorova::new(kappa, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (xi, xi_bar) = ordered_pair(&mut rng, -1.0, 2.0);
            let (eta, eta_bar) = ordered_pair(&mut rng, -1.0, 2.0);
            let m = quadrangle_margin(&h, xi, xi_bar, eta, eta_bar);
            let exact = kappa * (xi_bar - xi) * (eta_bar - eta);
            assert!(m > 0.0);
            assert!((m - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn lipschitz_estimate_for_fk() {
        let h = FrenkelKontorova::new(1.0, 1.0).unwrap();
        let c = estimate_lipschitz(&h, 0.0, 1.0);
        // |κ(ξ−η)| ≤ 2 on the box, |V′|/2 ≤ 1/(4π)
        assert!((2.0..=1.1 * (2.0 + 1.0 / (4.0 * std::f64::consts::PI)) + 1e-12).contains(&c));
    }
}
