use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solve::{minimize_transition, TransitionResult};
use super::spec::{Pattern, Turn};
use super::TransitionSpec;
use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::minimize::MinimizeOptions;

/// Default sup-distance separating two family members.
pub const DISTINCT_GAP: f64 = 0.4;

/// Turn selection `j` for a digit sequence: `j_0 = 0` and
/// `j_{i+1} = j_i + a_i + 1`, with `a_i = 0` past the digits and `j_i = i`
/// for negative `i`. Returns the selected base labels for labels
/// `first..` up to the last one that fits below `max_label`.
pub fn select_turns(digits: &[u32], first: i64, max_label: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (first.min(0)..0).map(|i| (i, i)).collect();
    let mut j = 0i64;
    let mut i = 0i64;
    while j <= max_label {
        out.push((i, j));
        let a = digits.get(i as usize).copied().unwrap_or(0) as i64;
        j += a + 1;
        i += 1;
    }
    out.retain(|&(i, _)| i >= first);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub digits: Vec<u32>,
    /// `(label i, base label j_i)` for every placed turn.
    pub selection: Vec<(i64, i64)>,
    pub spec: TransitionSpec,
    pub result: TransitionResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub members: Vec<FamilyMember>,
    /// Smallest pairwise sup-distance over the shared window.
    pub min_pairwise_distance: f64,
    pub distinct: bool,
    pub all_certified: bool,
}

/// Member spec for one digit sequence: label `i` sits at the base site of
/// label `j_i` with the base radius of label `i` and the mod-4 target of `i`.
/// Every member uses the base window.
pub fn family_spec(
    base: &TransitionSpec,
    digits: &[u32],
) -> Result<(TransitionSpec, Vec<(i64, i64)>)> {
    if base.pattern != Pattern::Mod4 {
        return Err(Error::Invalid(
            "orbit families are built on mod-4 base specs".into(),
        ));
    }
    let first = base.turns[0].label;
    let last = base.turns[base.turns.len() - 1].label;
    let selection = select_turns(digits, first, last);
    let turns: Vec<Turn> = selection
        .iter()
        .map(|&(i, j)| {
            let site = base
                .turn(j)
                .expect("selection stays inside the base labels")
                .site;
            let rho = base.turn(i).map(|t| t.rho).unwrap_or(base.turns[0].rho);
            Turn {
                label: i,
                site,
                rho,
                upper: super::spec::mod4_upper(i),
            }
        })
        .collect();
    let spec = TransitionSpec {
        turns,
        pattern: Pattern::Mod4,
        margin: base.margin,
        window: Some(base.window()),
        pair: base.pair,
    };
    spec.validate()?;
    Ok((spec, selection))
}

/// Solves every member in parallel and checks pairwise distinctness at
/// `threshold` in sup-norm over the shared window.
pub fn enumerate_orbit_family<G: GeneratingFunction + ?Sized>(
    h: &G,
    base: &TransitionSpec,
    digit_seqs: &[Vec<u32>],
    threshold: f64,
    opts: &MinimizeOptions,
) -> Result<FamilyReport> {
    base.validate()?;
    let gaps: Vec<i64> = base
        .turns
        .windows(2)
        .map(|w| w[1].site - w[0].site)
        .collect();
    if gaps.windows(2).any(|g| g[1] <= g[0]) {
        return Err(Error::Invalid("base spacing must increase strictly".into()));
    }
    let members = digit_seqs
        .par_iter()
        .map(|d| {
            let (spec, selection) = family_spec(base, d)?;
            let result = minimize_transition(h, &spec, opts)?;
            Ok(FamilyMember {
                digits: d.clone(),
                selection,
                spec,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut min_d = f64::INFINITY;
    for (a, ma) in members.iter().enumerate() {
        for mb in &members[a + 1..] {
            let d = ma
                .result
                .config()
                .sup_distance(mb.result.config())
                .unwrap_or(0.0);
            min_d = min_d.min(d);
        }
    }
    let all_certified = members.iter().all(|m| m.result.certified);
    Ok(FamilyReport {
        distinct: min_d >= threshold,
        min_pairwise_distance: min_d,
        members,
        all_certified,
    })
}
