use rayon::prelude::*;

use super::{c_level, minimize_segment, MinimizeOptions, SegmentSpec};
use crate::config::NeighboringPair;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;

/// Upper estimate of the gap function `φ(δ)`.
///
/// Minimizes `Σ (h(x_i, x_{i+1}) − c)` over closed loops `x_0 = x_n` with
/// `n ≤ n_max` inside `[u⁰, u¹]`, with the constraint `d(x) ≥ δ` realized by
/// pinning `x_0` to `u⁰ + δ` or `u¹ − δ`. By cyclic invariance of loops the
/// pinned index may be taken to be `0`.
pub fn phi_estimate<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: &NeighboringPair,
    delta: f64,
    n_max: usize,
    opts: &MinimizeOptions,
) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    if !(delta > 0.0 && delta <= pair.width() / 2.0) {
        return Err(Error::Invalid(format!(
            "delta must lie in (0, {}], got {delta}",
            pair.width() / 2.0
        )));
    }
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let c = c_level(h, pair);
    let pins = [pair.u0 + delta, pair.u1 - delta];
    let jobs: Vec<(usize, f64)> = (1..=n_max).flat_map(|n| pins.map(|p| (n, p))).collect();
    let values = jobs
        .par_iter()
        .map(|&(n, pin)| {
            if n == 1 {
                Ok(h.eval(pin, pin) - c)
            } else {
                let spec = SegmentSpec::bounded(n, pin, pin, pair.u0, pair.u1);
                minimize_segment(h, &spec, opts).map(|(_, v)| v - n as f64 * c)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// `φ̂` at each `δ` of a ladder, computed in parallel; pairs `(δ, φ̂(δ))`.
pub fn phi_ladder<G: GeneratingFunction + ?Sized>(
    h: &G,
    pair: &NeighboringPair,
    deltas: &[f64],
    n_max: usize,
    opts: &MinimizeOptions,
) -> Result<Vec<(f64, f64)>> {
    deltas
        .par_iter()
        .map(|&d| phi_estimate(h, pair, d, n_max, opts).map(|v| (d, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::FrenkelKontorova;
    use std::f64::consts::PI;

    fn setup() -> (FrenkelKontorova, NeighboringPair) {
        (
            FrenkelKontorova::new(1.0, 1.0).unwrap(),
            NeighboringPair::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn zero_delta() {
        let (h, pair) = setup();
        assert_eq!(
            phi_estimate(&h, &pair, 0.0, 5, &Default::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn midpoint_single_loop() {
        let (h, pair) = setup();
        let v = phi_estimate(&h, &pair, 0.5, 1, &Default::default()).unwrap();
        assert!((v - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn small_ladder_is_monotone() {
        let (h, pair) = setup();
        let l = phi_ladder(&h, &pair, &[0.1, 0.2], 6, &Default::default()).unwrap();
        assert!(l[0].1 > 0.0);
        assert!(l[1].1 >= l[0].1);
    }

    #[test]
    fn rejects_out_of_range_delta() {
        let (h, pair) = setup();
        assert!(phi_estimate(&h, &pair, 0.6, 3, &Default::default()).is_err());
        assert!(phi_estimate(&h, &pair, -0.1, 3, &Default::default()).is_err());
        assert!(phi_estimate(&h, &pair, 0.1, 0, &Default::default()).is_err());
    }
}
