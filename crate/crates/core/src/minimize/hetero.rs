//! Heteroclinic kinks between the members of a neighboring pair and the
//! action levels built from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::segment::{best_of, kink_profile, minimize_segment_seeded};
use super::{c_level, linear_init, ChainProblem, MinimizeOptions, SegmentSpec};
use crate::config::{
    check_order_and_bounds, max_abs, renorm_action, stationary_residuals, Configuration,
    NeighboringPair, OrderReport,
};
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::orbit::OrbitResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// From `u⁰` at the left end to `u¹` at the right end.
    Ascending,
    Descending,
}

impl Direction {
    pub fn ends(self, pair: &NeighboringPair) -> (f64, f64) {
        match self {
            Direction::Ascending => (pair.u0, pair.u1),
            Direction::Descending => (pair.u1, pair.u0),
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascending" | "up" => Ok(Direction::Ascending),
            "descending" | "down" => Ok(Direction::Descending),
            _ => Err(Error::Invalid(format!("unknown direction {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeteroclinicResult {
    /// Window `−N..=N`; `value` is `I = Σ (h − c)`.
    pub orbit: OrbitResult,
    pub order: OrderReport,
    pub direction: Direction,
    /// The level `c` subtracted from every link.
    pub c: f64,
}

fn tanh_seed(n_half: usize, from: f64, to: f64, center: f64, width: f64) -> Vec<f64> {
    kink_profile(2 * n_half, from, to, n_half as f64 + center, width)
}

/// Minimizes `I = Σ_{i=−N}^{N−1} (h(x_i, x_{i+1}) − c)` with `x_{−N}` and
/// `x_N` pinned to the pair members and every entry in `[u⁰, u¹]`.
///
/// The discrete kink has translation-indexed local minima, so the solver
/// starts from the linear profile and tanh profiles centered on a site and
/// on a bond, plus `opts.multistart − 1` randomly shifted tanh profiles, and
/// keeps the lowest action.
pub fn minimize_heteroclinic<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: &NeighboringPair,
    direction: Direction,
    n_half: usize,
    opts: &MinimizeOptions,
) -> Result<HeteroclinicResult> {
    opts.validate()?;
    if n_half < 2 {
        return Err(Error::Invalid(format!(
            "half window must be at least 2, got {n_half}"
        )));
    }
    let (from, to) = direction.ends(pair);
    let links = 2 * n_half;
    let problem = ChainProblem::pinned(h, links, from, to, Some((pair.u0, pair.u1)));
    let mut inits = vec![
        linear_init(links, from, to),
        tanh_seed(n_half, from, to, 0.0, 1.5),
        tanh_seed(n_half, from, to, 0.5, 1.5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let reach = (n_half as f64 / 4.0).max(1.0);
    for _ in 1..opts.multistart {
        let center = rng.gen_range(-reach..reach);
        let width = rng.gen_range(0.75..3.0);
        inits.push(tanh_seed(n_half, from, to, center, width));
    }
    let (x, _, sweeps, _) = best_of(&problem, inits, opts)?;
    let config = Configuration::new(-(n_half as i64), x)?;
    let c = c_level(h, pair);
    let value = renorm_action(h, &config, c);
    let max_residual = max_abs(&stationary_residuals(h, &config));
    let order = check_order_and_bounds(&config, pair);
    let interior = config.start + 1..config.end();
    let active_constraints = order
        .boundary_hits
        .iter()
        .copied()
        .filter(|i| interior.contains(i) && !order.saturated_tail.contains(i))
        .collect();
    Ok(HeteroclinicResult {
        orbit: OrbitResult {
            config,
            value,
            max_residual,
            active_constraints,
            sweeps,
            converged: true,
            block_report: None,
        },
        order,
        direction,
        c,
    })
}

/// Drift of the windowed action of a kink: for each `n ≤ N` compares
/// `|Σ_{−n}^{n−1} a_i − I|` against `C(|x_{−n} − u_s| + |u_e − x_n|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDrift {
    /// Largest `|Σ a_i − I| − C(…)` over the checked sub-windows; the bound
    /// holds when this is at most zero up to rounding.
    pub worst_excess: f64,
    pub worst_n: usize,
    pub checked: usize,
    pub lipschitz_c: f64,
}

impl WindowDrift {
    pub fn holds(&self, slack: f64) -> bool {
        self.worst_excess <= slack
    }
}

pub fn window_drift<G: GeneratingFunction + ?Sized>(
    h: &G,
    kink: &HeteroclinicResult,
    pair: &NeighboringPair,
    lipschitz_c: f64,
) -> Result<WindowDrift> {
    let cfg = &kink.orbit.config;
    let n_half = cfg.end();
    if cfg.start != -n_half || n_half < 1 {
        return Err(Error::Invalid(
            "kink window must be symmetric about 0".into(),
        ));
    }
    let (us, ue) = kink.direction.ends(pair);
    let total = kink.orbit.value;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_n = 0;
    for n in 1..=n_half {
        let sub = cfg.slice(-n, n)?;
        let partial = renorm_action(h, &sub, kink.c);
        let bound = lipschitz_c * ((cfg.at(-n) - us).abs() + (ue - cfg.at(n)).abs());
        let excess = (partial - total).abs() - bound;
        if excess > worst {
            worst = excess;
            worst_n = n as usize;
        }
    }
    Ok(WindowDrift {
        worst_excess: worst,
        worst_n,
        checked: n_half as usize,
        lipschitz_c,
    })
}

/// Action levels of free and pinned kinks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub c0_het: f64,
    pub c1_het: f64,
    pub c_star: f64,
    /// Excess of the best kink with `x_0` pinned to `u⁰+δ₁` or `u¹−δ₂`.
    pub e0: f64,
    /// Same for the descending kink with `δ₃`, `δ₄`.
    pub e1: f64,
    pub window: usize,
}

/// Minimal `I` over the window `−N..=N` with both ends and `x_0 = pin`
/// fixed; the two halves decouple into fixed-endpoint segments.
fn pinned_kink_level<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: &NeighboringPair,
    direction: Direction,
    n_half: usize,
    pin: f64,
    opts: &MinimizeOptions,
) -> Result<f64> {
    let (from, to) = direction.ends(pair);
    let (lo, hi) = (pair.u0, pair.u1);
    let half = |a: f64, b: f64| {
        let mid = n_half as f64 / 2.0;
        let seeds = vec![
            kink_profile(n_half, a, b, mid, 1.5),
            kink_profile(n_half, a, b, mid + 0.5, 1.5),
        ];
        minimize_segment_seeded(h, &SegmentSpec::bounded(n_half, a, b, lo, hi), seeds, opts)
    };
    let (_, left) = half(from, pin)?;
    let (_, right) = half(pin, to)?;
    Ok(left + right - 2.0 * n_half as f64 * c_level(h, pair))
}

pub fn gap_levels<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: &NeighboringPair,
    deltas: (f64, f64, f64, f64),
    n_half: usize,
    opts: &MinimizeOptions,
) -> Result<LevelReport> {
    let half = pair.width() / 2.0;
    for d in [deltas.0, deltas.1, deltas.2, deltas.3] {
        if !(d > 0.0 && d <= half) {
            return Err(Error::Invalid(format!(
                "gap offset {d} outside (0, {half}]"
            )));
        }
    }
    let c0_het = minimize_heteroclinic(h, pair, Direction::Ascending, n_half, opts)?
        .orbit
        .value;
    let c1_het = minimize_heteroclinic(h, pair, Direction::Descending, n_half, opts)?
        .orbit
        .value;
    let level = |dir, pins: [f64; 2]| -> Result<f64> {
        let a = pinned_kink_level(h, pair, dir, n_half, pins[0], opts)?;
        let b = pinned_kink_level(h, pair, dir, n_half, pins[1], opts)?;
        Ok(a.min(b))
    };
    let e0 = level(
        Direction::Ascending,
        [pair.u0 + deltas.0, pair.u1 - deltas.1],
    )? - c0_het;
    let e1 = level(
        Direction::Descending,
        [pair.u0 + deltas.2, pair.u1 - deltas.3],
    )? - c1_het;
    Ok(LevelReport {
        c0_het,
        c1_het,
        c_star: c0_het + c1_het,
        e0,
        e1,
        window: n_half,
    })
}
