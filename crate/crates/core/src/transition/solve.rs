use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::renorm::{
    broken_configuration, compute_block_constants, renorm_action_j, RenormWeights,
};
use super::TransitionSpec;
use crate::config::{
    check_order_and_bounds, max_abs, saturated, stationary_residuals, Configuration, OrderReport,
};
use crate::error::{Error, Result};
use crate::genfun::{estimate_lipschitz, GeneratingFunction};
use crate::minimize::{ChainProblem, Closure, MinimizeOptions};
use crate::orbit::{BlockReport, OrbitResult};

/// A turning constraint counts as active when `|x_k − u| − ρ ≥ −ACTIVE_TOL`.
pub const ACTIVE_TOL: f64 = 1e-12;
/// Largest stationarity residual accepted for a certified orbit.
pub const CERT_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionResult {
    /// `value` is `J`; `active_constraints` lists turn labels.
    pub orbit: OrbitResult,
    /// No active turning constraint, no box contact away from pinned ends and
    /// saturated tails, and residual at most [`CERT_RESIDUAL`].
    pub certified: bool,
    /// `J` of the concatenated per-block minimal segments.
    pub broken_value: f64,
    /// `−2C Σρ`.
    pub lower_bound: f64,
    pub lipschitz_c: f64,
    pub order: OrderReport,
    /// Interior indices touching `u⁰` or `u¹` outside saturated runs.
    pub box_contacts: Vec<i64>,
    /// Boundary hits in saturated runs of a dwell at that boundary: the
    /// orbit is within rounding of the target there.
    pub saturated_dwell: Vec<i64>,
    #[serde(skip)]
    pub weights: Option<RenormWeights>,
}

impl TransitionResult {
    pub fn config(&self) -> &Configuration {
        &self.orbit.config
    }
}

fn block_reports<G: GeneratingFunction + ?Sized>(
    h: &G,
    weights: &RenormWeights,
    x: &Configuration,
) -> Vec<BlockReport> {
    weights
        .blocks
        .iter()
        .map(|b| {
            let excess = (b.from..b.to)
                .map(|j| h.eval(x.at(j), x.at(j + 1)) - b.weight)
                .sum();
            let max_deviation = b.is_dwell().then(|| {
                (b.from..=b.to)
                    .map(|i| (x.at(i) - b.start_target).abs())
                    .fold(0.0, f64::max)
            });
            BlockReport {
                from: b.from,
                to: b.to,
                kind: if b.is_dwell() { "dwell" } else { "transition" }.into(),
                start_target: b.start_target,
                end_target: b.end_target,
                weight: b.weight,
                excess,
                max_deviation,
            }
        })
        .collect()
}

/// Boundary hits whose run of saturated entries lies in a dwell block at that
/// boundary or reaches a turning index targeting it.
fn dwell_saturation(
    spec: &TransitionSpec,
    weights: &RenormWeights,
    c: &Configuration,
    hits: &[i64],
) -> Vec<i64> {
    hits.iter()
        .copied()
        .filter(|&i| {
            let u = c.at(i);
            let (mut a, mut b) = (i, i);
            while a > c.start && saturated(c.at(a - 1), u) {
                a -= 1;
            }
            while b < c.end() && saturated(c.at(b + 1), u) {
                b += 1;
            }
            let in_dwell = weights
                .blocks
                .iter()
                .any(|bl| bl.is_dwell() && bl.start_target == u && bl.from <= a && b <= bl.to);
            let at_turn = spec
                .turns
                .iter()
                .any(|t| spec.target(t) == u && a <= t.site && t.site <= b);
            in_dwell || at_turn
        })
        .collect()
}

/// Minimizes `J` over the truncated window with ends pinned to the outer
/// targets, every entry in `[u⁰, u¹]` and `|x_{k_i} − u^{target}| ≤ ρ_i` at
/// the turning indices, starting from the broken configuration.
pub fn minimize_transition<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &TransitionSpec,
    opts: &MinimizeOptions,
) -> Result<TransitionResult> {
    opts.validate()?;
    let weights = compute_block_constants(h, spec, opts)?;
    let broken = broken_configuration(&weights)?;
    let broken_value = renorm_action_j(h, &weights, &broken)?;
    let (lo, hi) = spec.window();
    let n = (hi - lo + 1) as usize;
    let (u0, u1) = (spec.pair.u0, spec.pair.u1);
    let mut lower = vec![u0; n];
    let mut upper = vec![u1; n];
    for t in &spec.turns {
        let k = (t.site - lo) as usize;
        let u = spec.target(t);
        lower[k] = (u - t.rho).max(u0);
        upper[k] = (u + t.rho).min(u1);
    }
    for k in [0, n - 1] {
        lower[k] = broken.values[k];
        upper[k] = broken.values[k];
    }
    let problem = ChainProblem {
        h,
        lower,
        upper,
        closure: Closure::Open,
    };
    let mut inits = vec![broken.values.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 1..opts.multistart {
        let amp = 0.1 * spec.pair.width();
        inits.push(
            broken
                .values
                .iter()
                .map(|&v| v + rng.gen_range(-amp..amp))
                .collect(),
        );
    }
    let (x, _, sweeps, _) = crate::minimize::best_of_chain(&problem, inits, opts)?;
    let config = Configuration::new(lo, x)?;

    let value = renorm_action_j(h, &weights, &config)?;
    let max_residual = max_abs(&stationary_residuals(h, &config));
    let active_constraints: Vec<i64> = spec
        .turns
        .iter()
        .filter(|t| (config.at(t.site) - spec.target(t)).abs() - t.rho >= -ACTIVE_TOL)
        .map(|t| t.label)
        .collect();
    let order = check_order_and_bounds(&config, &spec.pair);
    let saturated_dwell = dwell_saturation(spec, &weights, &config, &order.boundary_hits);
    let box_contacts: Vec<i64> = order
        .boundary_hits
        .iter()
        .chain(&order.outside)
        .copied()
        .filter(|&i| i != lo && i != hi && !order.saturated_tail.contains(&i))
        .filter(|i| !saturated_dwell.contains(i))
        .collect();
    let lipschitz_c = estimate_lipschitz(h, u0, u1);
    let certified =
        active_constraints.is_empty() && box_contacts.is_empty() && max_residual <= CERT_RESIDUAL;
    Ok(TransitionResult {
        orbit: OrbitResult {
            block_report: Some(block_reports(h, &weights, &config)),
            config,
            value,
            max_residual,
            active_constraints,
            sweeps,
            converged: true,
        },
        certified,
        broken_value,
        lower_bound: -2.0 * lipschitz_c * spec.sum_rho(),
        lipschitz_c,
        order,
        box_contacts,
        saturated_dwell,
        weights: Some(weights),
    })
}

/// Outcome of growing the spacing until certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoSpacing {
    pub spec: TransitionSpec,
    pub result: TransitionResult,
    /// `(scale factor, certified)` for every attempt, in order.
    pub attempts: Vec<(f64, bool)>,
}

/// Solves `spec`, then rescales every gap and the margin by `1.5^r` until the
/// result certifies or `max_rounds` rescalings have failed. The last attempt
/// is returned either way.
pub fn minimize_transition_auto<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &TransitionSpec,
    max_rounds: usize,
    opts: &MinimizeOptions,
) -> Result<AutoSpacing> {
    let mut attempts = Vec::new();
    let mut factor = 1.0;
    loop {
        let s = spec.scaled(factor)?;
        let r = minimize_transition(h, &s, opts)?;
        attempts.push((factor, r.certified));
        if r.certified || attempts.len() > max_rounds {
            return Ok(AutoSpacing {
                spec: s,
                result: r,
                attempts,
            });
        }
        factor *= 1.5;
    }
}

/// Empirical spacing threshold for uniform specs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingSearch {
    /// Smallest spacing found to certify.
    pub certified_spacing: i64,
    /// Largest spacing found to fail, if any failed.
    pub failing_spacing: Option<i64>,
    /// `(spacing, certified)` in the order tried.
    pub trials: Vec<(i64, bool)>,
}

/// Halves the spacing of an `n`-transition uniform spec from `start` until
/// certification fails, then bisects between the last failure and the last
/// success. The margin is twice the spacing.
pub fn spacing_threshold<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: crate::config::NeighboringPair,
    n_transitions: usize,
    rho: f64,
    start: i64,
    opts: &MinimizeOptions,
) -> Result<SpacingSearch> {
    if start < 1 {
        return Err(Error::Invalid("start spacing must be positive".into()));
    }
    let mut trials = Vec::new();
    let mut run = |s: i64| -> Result<bool> {
        let spec = TransitionSpec::uniform(n_transitions, s, rho, 2 * s as usize, pair)?;
        let ok = minimize_transition(h, &spec, opts)?.certified;
        trials.push((s, ok));
        Ok(ok)
    };
    if !run(start)? {
        return Err(Error::Invalid(format!(
            "spacing {start} does not certify; start larger"
        )));
    }
    let mut pass = start;
    let mut fail = None;
    while pass > 1 {
        let s = pass / 2;
        if run(s)? {
            pass = s;
        } else {
            fail = Some(s);
            break;
        }
    }
    if let Some(mut f) = fail {
        while pass - f > 1 {
            let mid = (pass + f) / 2;
            if run(mid)? {
                pass = mid;
            } else {
                f = mid;
            }
        }
        fail = Some(f);
    }
    Ok(SpacingSearch {
        certified_spacing: pass,
        failing_spacing: fail,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NeighboringPair;
    use crate::genfun::FrenkelKontorova;
    use crate::transition::{build_one_sided_spec, Pattern};

    fn setup() -> (FrenkelKontorova, NeighboringPair) {
        (
            FrenkelKontorova::new(1.0, 1.0).unwrap(),
            NeighboringPair::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn two_transitions_certify_at_spacing_40() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(2, 40, 0.05, 80, pair).unwrap();
        let r = minimize_transition(&h, &spec, &Default::default()).unwrap();
        assert!(r.certified);
        assert!(r.broken_value.abs() <= 1e-10);
        assert!(r.orbit.value <= 1e-10 && r.orbit.value >= r.lower_bound - 1e-10);
    }

    #[test]
    fn single_transition_matches_kink() {
        let (h, pair) = setup();
        let spec = TransitionSpec::with_pattern(
            &[0, 40],
            0,
            &[0.05],
            Pattern::Explicit,
            Some(&[false, true]),
            40,
            pair,
        )
        .unwrap();
        let r = minimize_transition(&h, &spec, &Default::default()).unwrap();
        assert!(r.certified);
        let kink = crate::minimize::minimize_heteroclinic(
            &h,
            &pair,
            crate::minimize::Direction::Ascending,
            60,
            &Default::default(),
        )
        .unwrap();
        let w = r.weights.as_ref().unwrap();
        let t = w.blocks.iter().find(|b| !b.is_dwell()).unwrap();
        let expected = kink.orbit.value - t.weight * t.len() as f64;
        assert!(
            (r.orbit.value - expected).abs() <= 1e-8,
            "{} vs {expected}",
            r.orbit.value
        );
    }

    #[test]
    fn tight_spacing_is_not_certified() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(2, 4, 0.05, 8, pair).unwrap();
        let r = minimize_transition(&h, &spec, &Default::default()).unwrap();
        assert!(!r.certified);
    }

    #[test]
    fn one_sided_left_tail_dwells_at_u0() {
        let (h, pair) = setup();
        let sites: Vec<i64> = (-2..=2).map(|i| 40 * i).collect();
        let spec = build_one_sided_spec(0, 1, &sites, -2, &[0.05], 80, pair).unwrap();
        assert_eq!(spec.pattern, Pattern::OneSided { a: 0, b: 1 });
        let r = minimize_transition(&h, &spec, &Default::default()).unwrap();
        assert!(r.certified);
        let (lo, _) = spec.window();
        for i in lo..0 {
            assert!(r.config().at(i).abs() <= 0.05);
        }
    }

    #[test]
    fn auto_spacing_grows_until_certified() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(2, 4, 0.05, 8, pair).unwrap();
        let a = minimize_transition_auto(&h, &spec, 8, &Default::default()).unwrap();
        assert!(a.result.certified);
        assert!(!a.attempts[0].1);
    }
}
