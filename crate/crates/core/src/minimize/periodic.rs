use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::segment::best_of;
use super::{ChainProblem, Closure, MinimizeOptions};
use crate::config::{NeighboringPair, PeriodicOrbit};
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::scalar::golden_section;

/// Scan resolution for one-dimensional periodic problems.
const SCAN_1D: usize = 400;
/// Values within this of the scanned minimum count as ties.
const TIE_TOL: f64 = 1e-12;

/// Minimize `f` over one period `[0, 1)`: the leftmost grid point within
/// [`TIE_TOL`] of the scanned minimum is refined, and the refinement is kept
/// only if it strictly lowers the value. Flat valleys therefore resolve to
/// their left end deterministically.
fn leftmost_periodic_min<F: Fn(f64) -> f64>(f: F, grid: usize) -> (f64, f64) {
    let vals: Vec<f64> = (0..grid).map(|i| f(i as f64 / grid as f64)).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let i = vals.iter().position(|&v| v <= min + TIE_TOL).unwrap_or(0);
    let x = i as f64 / grid as f64;
    let step = 1.0 / grid as f64;
    let (t, ft) = golden_section(&f, x - step, x + step, 1e-13);
    if ft < vals[i] {
        let t = t.rem_euclid(1.0);
        (t, f(t))
    } else {
        (x, vals[i])
    }
}

/// `(q, p)`-periodic minimizer: minimizes `Σ_{i<q} h(x_i, x_{i+1})` with
/// `x_q = x_0 + p`, normalized so that `x_0 ∈ [0, 1)`. Returns the orbit and
/// its action per period.
pub fn find_periodic_minimizer<G: GeneratingFunction + ?Sized>(
    h: &G,
    q: usize,
    p: i64,
    opts: &MinimizeOptions,
) -> Result<(PeriodicOrbit, f64)> {
    opts.validate()?;
    if q == 0 {
        return Err(Error::Invalid("period q must be at least 1".into()));
    }
    let shift = p as f64;
    if q == 1 {
        let (x, v) = leftmost_periodic_min(|x| h.eval(x, x + shift), SCAN_1D);
        return Ok((PeriodicOrbit::new(1, p, vec![x])?, v));
    }
    let problem = ChainProblem {
        h,
        lower: vec![f64::NEG_INFINITY; q],
        upper: vec![f64::INFINITY; q],
        closure: Closure::Periodic { shift },
    };
    let base: Vec<f64> = (0..q).map(|i| shift * i as f64 / q as f64).collect();
    let mut inits = vec![base.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 1..opts.multistart {
        let offset = rng.gen_range(0.0..1.0);
        inits.push(
            base.iter()
                .map(|&b| b + offset + rng.gen_range(-0.25..0.25) / q as f64)
                .collect(),
        );
    }
    let (mut x, _, _, _) = best_of(&problem, inits, opts)?;
    let wrap = x[0].floor();
    for v in &mut x {
        *v -= wrap;
    }
    let value = problem.action(&x);
    Ok((PeriodicOrbit::new(q, p, x)?, value))
}

/// Two consecutive minimizers of `h(x, x)` in the lift, found by a scan of
/// `10⁴` points on `[0, 1)` with local refinement. With several minimizers per
/// period the leftmost adjacent pair in `[0, 1)` is returned.
pub fn find_neighboring_pair<G: GeneratingFunction + ?Sized>(
    h: &G,
    _opts: &MinimizeOptions,
) -> Result<NeighboringPair> {
    const GRID: usize = 10_000;
    let step = 1.0 / GRID as f64;
    let d = |x: f64| h.eval(x, x);
    let vals: Vec<f64> = (0..GRID).map(|i| d(i as f64 * step)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("h(x, x) not finite on the scan grid".into()));
    }
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let level = min + 1e-10 * (1.0 + min.abs());
    let flat = vals.iter().filter(|&&v| v <= min + TIE_TOL).count();
    if flat > GRID / 100 {
        return Err(Error::DegeneratePair(format!(
            "{flat} of {GRID} scan points attain the minimum of h(x, x)"
        )));
    }

    let mut minimizers: Vec<f64> = Vec::new();
    for i in 0..GRID {
        let (l, r) = (vals[(i + GRID - 1) % GRID], vals[(i + 1) % GRID]);
        if vals[i] > level || vals[i] > l || vals[i] > r {
            continue;
        }
        let x = i as f64 * step;
        let (t, ft) = golden_section(d, x - step, x + step, 1e-13);
        let m = if ft < vals[i] { t.rem_euclid(1.0) } else { x };
        if !minimizers
            .iter()
            .any(|&y| (y - m).abs() < 1e-9 || (y - m).abs() > 1.0 - 1e-9)
        {
            minimizers.push(m);
        }
    }
    minimizers.sort_by(f64::total_cmp);
    match minimizers.as_slice() {
        [] => Err(Error::Numeric("no minimizer of h(x, x) found".into())),
        [u] => NeighboringPair::new(*u, u + 1.0),
        [u0, u1, ..] => NeighboringPair::new(*u0, *u1),
    }
}

/// `c = min h(x, x)`, attained at the pair's lower member.
pub fn c_level<G: GeneratingFunction + ?Sized>(h: &G, pair: &NeighboringPair) -> f64 {
    h.eval(pair.u0, pair.u0)
}

/// `min_diag − min_grid` of `h` on an `(n+1)²` grid over `[0, 1]²`, where
/// `min_diag` is taken over the grid's diagonal. Zero when the minimum of `h`
/// is attained on the diagonal.
pub fn diagonal_min_gap<G: GeneratingFunction + ?Sized>(h: &G, n: usize) -> f64 {
    let n = n.max(1);
    let t = |i: usize| i as f64 / n as f64;
    let mut grid_min = f64::INFINITY;
    let mut diag_min = f64::INFINITY;
    for i in 0..=n {
        for j in 0..=n {
            let v = h.eval(t(i), t(j));
            grid_min = grid_min.min(v);
            if i == j {
                diag_min = diag_min.min(v);
            }
        }
    }
    diag_min - grid_min
}
