use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{linear_init, ChainProblem, MinimizeOptions};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;

/// Fixed-endpoint problem: minimize `Σ_{i<n} h(x_i, x_{i+1})` with
/// `x_0 = a`, `x_n = b` and optional box bounds on every entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSpec {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub bounds: Option<(f64, f64)>,
}

impl SegmentSpec {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        SegmentSpec {
            n,
            a,
            b,
            bounds: None,
        }
    }

    pub fn bounded(n: usize, a: f64, b: f64, lo: f64, hi: f64) -> Self {
        SegmentSpec {
            n,
            a,
            b,
            bounds: Some((lo, hi)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("segment needs at least one link".into()));
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::Invalid("segment endpoints must be finite".into()));
        }
        if let Some((lo, hi)) = self.bounds {
            if !(lo <= hi) {
                return Err(Error::Invalid(format!("empty box [{lo}, {hi}]")));
            }
            for e in [self.a, self.b] {
                if e < lo || e > hi {
                    return Err(Error::Invalid(format!(
                        "endpoint {e} outside box [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn random_inits(spec: &SegmentSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = linear_init(spec.n, spec.a, spec.b);
    let (lo, hi) = spec.bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let amp = if spec.bounds.is_some() {
        0.5 * (hi - lo)
    } else {
        0.5
    };
    (0..count)
        .map(|_| {
            let mut x = base.clone();
            for v in &mut x[1..spec.n] {
                *v = (*v + rng.gen_range(-amp..=amp)).clamp(lo, hi);
            }
            x
        })
        .collect()
}

/// Solve from each initial iterate in parallel and keep the lowest action;
/// ties go to the earliest start.
pub(crate) fn best_of<G: GeneratingFunction + ?Sized>(
    problem: &ChainProblem<'_, G>,
    inits: Vec<Vec<f64>>,
    opts: &MinimizeOptions,
) -> Result<(Vec<f64>, f64, usize, f64)> {
    let outcomes: Vec<_> = inits
        .into_par_iter()
        .map(|init| problem.solve(init, opts))
        .collect();
    let mut best: Option<(Vec<f64>, f64, usize, f64)> = None;
    let mut first_err = None;
    for out in outcomes {
        match out {
            Ok(sol) => {
                let value = problem.action(&sol.x);
                if best.as_ref().is_none_or(|b| value < b.1) {
                    best = Some((sol.x, value, sol.sweeps, sol.max_residual));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (best, first_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::Invalid("no initial iterates".into())),
    }
}

/// Monotone tanh profile from `a` at site 0 to `b` at site `n_links`,
/// centered at `center` (a site coordinate, may be fractional).
pub(crate) fn kink_profile(n_links: usize, a: f64, b: f64, center: f64, width: f64) -> Vec<f64> {
    let mut x: Vec<f64> = (0..=n_links)
        .map(|i| a + (b - a) * 0.5 * (1.0 + ((i as f64 - center) / width).tanh()))
        .collect();
    x[0] = a;
    x[n_links] = b;
    x
}

/// [`minimize_segment`] with extra initial iterates tried after the linear
/// one and before the random ones.
pub(crate) fn minimize_segment_seeded<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &SegmentSpec,
    seeds: Vec<Vec<f64>>,
    opts: &MinimizeOptions,
) -> Result<(Configuration, f64)> {
    spec.validate()?;
    opts.validate()?;
    if spec.n == 1 {
        let c = Configuration::new(0, vec![spec.a, spec.b])?;
        return Ok((c, h.eval(spec.a, spec.b)));
    }
    let problem = ChainProblem::pinned(h, spec.n, spec.a, spec.b, spec.bounds);
    let mut inits = vec![linear_init(spec.n, spec.a, spec.b)];
    inits.extend(seeds);
    if opts.multistart > 1 {
        inits.extend(random_inits(spec, opts.multistart - 1, opts.seed));
    }
    let (x, value, _, _) = best_of(&problem, inits, opts)?;
    Ok((Configuration::new(0, x)?, value))
}

/// Minimal segment `C(n; a, b)`: returns the minimizing window (start index
/// 0) and its action.
pub fn minimize_segment<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &SegmentSpec,
    opts: &MinimizeOptions,
) -> Result<(Configuration, f64)> {
    minimize_segment_seeded(h, spec, Vec::new(), opts)
}

/// Largest sup-distance between the minimal segments reached from `starts`
/// random initial iterates. Starts that end in a strictly higher local
/// minimum (kink position traps) are discarded; among those attaining the
/// lowest action within `1e-10`, distinct minimal segments sharing both
/// endpoints should not exist, so the spread is expected at solver
/// precision.
pub fn segment_multistart_spread<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &SegmentSpec,
    starts: usize,
    opts: &MinimizeOptions,
) -> Result<f64> {
    spec.validate()?;
    if spec.n == 1 {
        return Ok(0.0);
    }
    let problem = ChainProblem::pinned(h, spec.n, spec.a, spec.b, spec.bounds);
    let sols: Vec<(Vec<f64>, f64)> = random_inits(spec, starts.max(2), opts.seed)
        .into_par_iter()
        .map(|init| {
            problem.solve(init, opts).map(|s| {
                let v = problem.action(&s.x);
                (s.x, v)
            })
        })
        .collect::<Result<_>>()?;
    let best = sols.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let minimal: Vec<&Vec<f64>> = sols
        .iter()
        .filter(|s| s.1 <= best + 1e-10)
        .map(|s| &s.0)
        .collect();
    let mut spread = 0.0f64;
    for a in &minimal {
        for b in &minimal {
            let d = a
                .iter()
                .zip(b.iter())
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max);
            spread = spread.max(d);
        }
    }
    Ok(spread)
}
