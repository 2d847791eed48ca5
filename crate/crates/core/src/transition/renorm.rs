use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TransitionSpec;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::minimize::{kink_profile, minimize_segment_seeded, MinimizeOptions, SegmentSpec};

/// Links `from..to` (sites `from..=to`) between consecutive turns, or
/// between a turn and a window end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub from: i64,
    pub to: i64,
    pub start_target: f64,
    pub end_target: f64,
    /// Block constant `c(j) = C(|I|, u_s, u_e) / |I|`.
    pub weight: f64,
    /// A minimal segment realizing `C(|I|, u_s, u_e)`.
    pub segment: Configuration,
}

impl Block {
    pub fn len(&self) -> usize {
        (self.to - self.from) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.to == self.from
    }

    pub fn is_dwell(&self) -> bool {
        self.start_target == self.end_target
    }
}

/// Per-block constants `c(j)` of the renormalized action over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormWeights {
    pub window: (i64, i64),
    pub blocks: Vec<Block>,
}

impl RenormWeights {
    /// `c(j)` for the link `(j, j+1)`.
    pub fn weight_at(&self, j: i64) -> Option<f64> {
        self.blocks
            .iter()
            .find(|b| b.from <= j && j < b.to)
            .map(|b| b.weight)
    }
}

/// Block boundaries and targets: turning sites, plus the window ends when the
/// window extends beyond the outer turns (those tail blocks dwell at the
/// outer turn's target).
pub(crate) fn block_layout(spec: &TransitionSpec) -> Vec<(i64, i64, f64, f64)> {
    let (lo, hi) = spec.window();
    let first = &spec.turns[0];
    let last = &spec.turns[spec.turns.len() - 1];
    let mut out = Vec::new();
    if lo < first.site {
        let t = spec.target(first);
        out.push((lo, first.site, t, t));
    }
    for w in spec.turns.windows(2) {
        out.push((w[0].site, w[1].site, spec.target(&w[0]), spec.target(&w[1])));
    }
    if hi > last.site {
        let t = spec.target(last);
        out.push((last.site, hi, t, t));
    }
    out
}

/// Fixed-endpoint minima `C(|I|, u_s, u_e)` inside `[u⁰, u¹]` for every
/// block, solved in parallel. Transition blocks also try kink profiles
/// centered on the middle site and bond.
pub fn compute_block_constants<G: GeneratingFunction + ?Sized>(
    h: &G,
    spec: &TransitionSpec,
    opts: &MinimizeOptions,
) -> Result<RenormWeights> {
    spec.validate()?;
    let (u0, u1) = (spec.pair.u0, spec.pair.u1);
    let blocks = block_layout(spec)
        .into_par_iter()
        .map(|(from, to, s, e)| {
            let n = (to - from) as usize;
            let seeds = if s == e {
                Vec::new()
            } else {
                let mid = n as f64 / 2.0;
                vec![
                    kink_profile(n, s, e, mid, 1.5),
                    kink_profile(n, s, e, mid + 0.5, 1.5),
                ]
            };
            let (seg, value) =
                minimize_segment_seeded(h, &SegmentSpec::bounded(n, s, e, u0, u1), seeds, opts)?;
            Ok(Block {
                from,
                to,
                start_target: s,
                end_target: e,
                weight: value / n as f64,
                segment: Configuration::new(from, seg.values)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RenormWeights {
        window: spec.window(),
        blocks,
    })
}

/// `J = Σ (h(x_j, x_{j+1}) − c(j))` over the links of `c`, which must lie in
/// the weights' window.
pub fn renorm_action_j<G: GeneratingFunction + ?Sized>(
    h: &G,
    weights: &RenormWeights,
    c: &Configuration,
) -> Result<f64> {
    let (lo, hi) = weights.window;
    if c.start < lo || c.end() > hi {
        return Err(Error::Invalid(format!(
            "configuration [{}, {}] leaves the window [{lo}, {hi}]",
            c.start,
            c.end()
        )));
    }
    let mut sum = 0.0;
    for b in &weights.blocks {
        let from = b.from.max(c.start);
        let to = b.to.min(c.end());
        for j in from..to {
            sum += h.eval(c.at(j), c.at(j + 1)) - b.weight;
        }
    }
    Ok(sum)
}

/// Concatenation of the per-block minimal segments; its `J` vanishes up to
/// rounding.
pub fn broken_configuration(weights: &RenormWeights) -> Result<Configuration> {
    let mut values = Vec::new();
    for (i, b) in weights.blocks.iter().enumerate() {
        let skip = usize::from(i > 0);
        values.extend_from_slice(&b.segment.values[skip..]);
    }
    Configuration::new(weights.window.0, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NeighboringPair;
    use crate::genfun::FrenkelKontorova;

    fn setup() -> (FrenkelKontorova, NeighboringPair) {
        (
            FrenkelKontorova::new(1.0, 1.0).unwrap(),
            NeighboringPair::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn dwell_weights_equal_c() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(2, 12, 0.05, 6, pair).unwrap();
        let w = compute_block_constants(&h, &spec, &Default::default()).unwrap();
        assert_eq!(w.blocks.len(), 6);
        for b in w.blocks.iter().filter(|b| b.is_dwell()) {
            assert!(b.weight.abs() <= 1e-12, "{b:?}");
        }
        for b in w.blocks.iter().filter(|b| !b.is_dwell()) {
            assert!(b.weight > 0.0);
        }
    }

    #[test]
    fn shift_invariance_of_weights() {
        let (h, pair) = setup();
        let a = TransitionSpec::uniform(1, 10, 0.05, 5, pair).unwrap();
        // relabel so that no turn carries label 0 and k_0 = 0 does not apply
        let mut b = a.clone();
        for t in &mut b.turns {
            t.site += 7;
            t.label += 4;
        }
        let wa = compute_block_constants(&h, &a, &Default::default()).unwrap();
        let wb = compute_block_constants(&h, &b, &Default::default()).unwrap();
        for (x, y) in wa.blocks.iter().zip(&wb.blocks) {
            assert_eq!(x.weight, y.weight);
        }
    }

    #[test]
    fn broken_configuration_has_zero_j() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(2, 16, 0.05, 10, pair).unwrap();
        let w = compute_block_constants(&h, &spec, &Default::default()).unwrap();
        let y = broken_configuration(&w).unwrap();
        assert_eq!((y.start, y.end()), spec.window());
        assert!(renorm_action_j(&h, &w, &y).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn window_additivity() {
        let (h, pair) = setup();
        let spec = TransitionSpec::uniform(1, 10, 0.05, 6, pair).unwrap();
        let w = compute_block_constants(&h, &spec, &Default::default()).unwrap();
        let y = broken_configuration(&w).unwrap().shifted(0.01);
        let whole = renorm_action_j(&h, &w, &y).unwrap();
        let left = renorm_action_j(&h, &w, &y.slice(-6, 7).unwrap()).unwrap();
        let right = renorm_action_j(&h, &w, &y.slice(7, 26).unwrap()).unwrap();
        assert!((whole - left - right).abs() < 1e-12);
    }
}
