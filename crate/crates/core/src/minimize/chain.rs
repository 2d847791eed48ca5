//! Projected nonlinear Gauss–Seidel on nearest-neighbour chains.
//!
//! The action `Σ h(x_i, x_{i+1})` couples each coordinate only to its two
//! neighbours, so a sweep of exact one-dimensional minimizations is cheap
//! and never needs a global Hessian. Box bounds are handled by projection
//! inside each coordinate update.

use super::MinimizeOptions;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::scalar::golden_section;

/// How the ends of the chain are closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Closure {
    /// Entries with `lower == upper` are held fixed; ends are normally pinned.
    Open,
    /// `x_{i+n} = x_i + shift` with `n` the number of stored entries.
    Periodic { shift: f64 },
}

pub(crate) struct ChainProblem<'a, G: ?Sized> {
    pub h: &'a G,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub closure: Closure,
}

#[derive(Debug, Clone)]
pub(crate) struct ChainSolution {
    pub x: Vec<f64>,
    pub sweeps: usize,
    pub max_residual: f64,
}

impl<'a, G: GeneratingFunction + ?Sized> ChainProblem<'a, G> {
    /// Open chain with pinned ends and a common box on the interior.
    pub fn pinned(h: &'a G, n_links: usize, a: f64, b: f64, bounds: Option<(f64, f64)>) -> Self {
        let (lo, hi) = bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        let mut lower = vec![lo; n_links + 1];
        let mut upper = vec![hi; n_links + 1];
        lower[0] = a;
        upper[0] = a;
        lower[n_links] = b;
        upper[n_links] = b;
        ChainProblem {
            h,
            lower,
            upper,
            closure: Closure::Open,
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    fn is_free(&self, i: usize) -> bool {
        self.lower[i] < self.upper[i]
    }

    fn neighbours(&self, x: &[f64], i: usize) -> Option<(f64, f64)> {
        let n = x.len();
        match self.closure {
            Closure::Open => (i > 0 && i + 1 < n).then(|| (x[i - 1], x[i + 1])),
            Closure::Periodic { shift } => {
                let left = if i == 0 { x[n - 1] - shift } else { x[i - 1] };
                let right = if i + 1 == n { x[0] + shift } else { x[i + 1] };
                Some((left, right))
            }
        }
    }

    /// Total action over the stored links (including the wrap link when
    /// periodic).
    pub fn action(&self, x: &[f64]) -> f64 {
        let mut s: f64 = x.windows(2).map(|w| self.h.eval(w[0], w[1])).sum();
        if let Closure::Periodic { shift } = self.closure {
            s += self.h.eval(x[x.len() - 1], x[0] + shift);
        }
        s
    }

    /// Projected stationarity residual at a free coordinate.
    fn residual_at(&self, x: &[f64], i: usize) -> f64 {
        let Some((l, r)) = self.neighbours(x, i) else {
            return 0.0;
        };
        let g = self.h.partials(l, x[i]).1 + self.h.partials(x[i], r).0;
        if (x[i] <= self.lower[i] && g > 0.0) || (x[i] >= self.upper[i] && g < 0.0) {
            0.0
        } else {
            g.abs()
        }
    }

    pub fn max_residual(&self, x: &[f64]) -> f64 {
        (0..x.len())
            .filter(|&i| self.is_free(i))
            .map(|i| self.residual_at(x, i))
            .fold(0.0, f64::max)
    }

    fn update(&self, l: f64, x: f64, r: f64, lo: f64, hi: f64) -> f64 {
        let h = self.h;
        let f = |t: f64| h.eval(l, t) + h.eval(t, r);
        let mut cur = x.clamp(lo, hi);
        for _ in 0..12 {
            let g = h.partials(l, cur).1 + h.partials(cur, r).0;
            let curv = h.second_partials(l, cur).d22 + h.second_partials(cur, r).d11;
            if curv <= 0.0 || !curv.is_finite() {
                return self.fallback(&f, cur, lo, hi);
            }
            let step = -g / curv;
            let mut trial = (cur + step).clamp(lo, hi);
            if (trial - cur).abs() > 1e-6 {
                // damp large steps until the coordinate objective decreases
                let f0 = f(cur);
                let mut t = 1.0;
                while f(trial) > f0 && t > 1e-8 {
                    t *= 0.5;
                    trial = (cur + t * step).clamp(lo, hi);
                }
                if t <= 1e-8 {
                    return self.fallback(&f, cur, lo, hi);
                }
            }
            let moved = (trial - cur).abs();
            cur = trial;
            if moved <= 1e-15 * (1.0 + cur.abs()) {
                break;
            }
        }
        cur
    }

    fn fallback<F: Fn(f64) -> f64>(&self, f: &F, x: f64, lo: f64, hi: f64) -> f64 {
        let a = (x - 0.5).max(lo);
        let b = (x + 0.5).min(hi);
        let (t, ft) = golden_section(f, a, b, 1e-12);
        if ft <= f(x) {
            t
        } else {
            x
        }
    }

    /// Sweeps until the largest coordinate change is at most `tol` and the
    /// largest projected residual at most `10·tol`.
    pub fn solve(&self, init: Vec<f64>, opts: &MinimizeOptions) -> Result<ChainSolution> {
        let n = self.len();
        if init.len() != n {
            return Err(Error::Invalid(format!(
                "initial iterate has {} entries, chain has {n}",
                init.len()
            )));
        }
        let mut x: Vec<f64> = init
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| v.clamp(lo, hi))
            .collect();
        let free: Vec<usize> = (0..n)
            .filter(|&i| self.is_free(i) && self.neighbours(&x, i).is_some())
            .collect();
        let mut max_change = f64::INFINITY;
        let mut max_residual = f64::INFINITY;
        for sweep in 1..=opts.max_sweeps {
            max_change = 0.0;
            for &i in &free {
                let (l, r) = self
                    .neighbours(&x, i)
                    .expect("free coordinates have neighbours");
                let new = self.update(l, x[i], r, self.lower[i], self.upper[i]);
                max_change = max_change.max((new - x[i]).abs());
                x[i] = new;
            }
            if max_change <= opts.tol {
                max_residual = self.max_residual(&x);
                if max_residual <= 10.0 * opts.tol {
                    return Ok(ChainSolution {
                        x,
                        sweeps: sweep,
                        max_residual,
                    });
                }
            }
        }
        if max_residual.is_infinite() {
            max_residual = self.max_residual(&x);
        }
        Err(Error::NotConverged {
            sweeps: opts.max_sweeps,
            max_change,
            max_residual,
            last_iterate: x,
        })
    }
}

/// Linear interpolation from `a` to `b` over `n_links` links.
pub(crate) fn linear_init(n_links: usize, a: f64, b: f64) -> Vec<f64> {
    (0..=n_links)
        .map(|i| a + (b - a) * i as f64 / n_links as f64)
        .collect()
}
