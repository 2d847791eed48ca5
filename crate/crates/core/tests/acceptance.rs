//! Acceptance suite on the Frenkel–Kontorova model with κ = 1, K = 1.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twist_core::config::{max_abs, rotation_number, stationary_residuals};
use twist_core::genfun::{check_axioms, induced_map_auto, AxiomOptions};
use twist_core::minimize::{
    build_h, c_level, diagonal_min_gap, find_neighboring_pair, find_periodic_minimizer,
    lift_configuration, minimize_heteroclinic, minimize_segment, phi_ladder, window_drift,
    Direction,
};
use twist_core::transition::{
    build_one_sided_spec, enumerate_orbit_family, minimize_transition, Pattern, TransitionResult,
    DISTINCT_GAP,
};
use twist_core::{
    Configuration, FrenkelKontorova, GeneratingFunction, MapPoint, MinimizeOptions,
    NeighboringPair, SegmentSpec, TransitionSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fk() -> FrenkelKontorova {
    FrenkelKontorova::new(1.0, 1.0).unwrap()
}

fn unit_pair() -> NeighboringPair {
    NeighboringPair::new(0.0, 1.0).unwrap()
}

fn opts() -> MinimizeOptions {
    MinimizeOptions::default()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn axioms() -> Outcome {
    let h = fk();
    let (report, elapsed) = timed(|| check_axioms(&h, 1000, 7, &AxiomOptions::default()));
    let h1 = report.check("h1").unwrap();
    let h3 = report.check("h3").unwrap();
    let rev = report.check("rev").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cross = 0.0f64;
    for _ in 0..1000 {
        let (x, y) = (rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..2.0));
        cross = cross.max((h.second_partials(x, y).d12 + 1.0).abs());
    }
    let pass = h1.passed
        && h3.passed
        && cross <= 1e-6
        && rev.margin == 0.0
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "h1 err {:.1e}, h3 min margin {:.3e}, |d12+1| {:.1e}, rev err {:.1e}, {:.3}s",
            h1.margin,
            h3.margin,
            cross,
            rev.margin,
            elapsed.as_secs_f64()
        ),
    )
}

/// Exhaustive minimum over a grid for every interior coordinate, by dynamic
/// programming over the chain.
fn grid_segment_min(h: &FrenkelKontorova, n: usize, a: f64, b: f64, grid: &[f64]) -> f64 {
    if n == 1 {
        return h.eval(a, b);
    }
    let mut best: Vec<f64> = grid.iter().map(|&g| h.eval(a, g)).collect();
    for _ in 2..n {
        best = grid
            .iter()
            .map(|&g| {
                grid.iter()
                    .zip(&best)
                    .map(|(&p, &v)| v + h.eval(p, g))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
    }
    grid.iter()
        .zip(&best)
        .map(|(&p, &v)| v + h.eval(p, b))
        .fold(f64::INFINITY, f64::min)
}

fn oracle_segments() -> Outcome {
    let h = fk();
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (worst, elapsed) = timed(|| {
        let mut worst = 0.0f64;
        let mut below = true;
        for _ in 0..20 {
            let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            for n in 1..=4 {
                let (_, v) = minimize_segment(&h, &SegmentSpec::new(n, a, b), &opts()).unwrap();
                let g = grid_segment_min(&h, n, a, b, &grid);
                worst = worst.max((v - g).abs());
                below &= v <= g + 1e-12;
            }
        }
        (worst, below)
    });
    let (worst, below) = worst;
    outcome(
        worst <= 1e-3 && below && elapsed < Duration::from_secs(30),
        format!(
            "max |solver − grid| {worst:.2e}, solver never above grid: {below}, {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn neighboring_pair() -> Outcome {
    let h = fk();
    let pair = find_neighboring_pair(&h, &opts()).unwrap();
    let c = c_level(&h, &pair);
    let gap = diagonal_min_gap(&h, 1001);
    outcome(
        pair.u0.abs() <= 1e-12
            && (pair.u1 - 1.0).abs() <= 1e-12
            && c.abs() <= 1e-12
            && gap.abs() <= 1e-9,
        format!(
            "pair ({:.3e}, {:.12}), c {c:.1e}, diagonal gap {gap:.1e}",
            pair.u0, pair.u1
        ),
    )
}

fn heteroclinic() -> Outcome {
    let h = fk();
    let pair = unit_pair();
    let ((up, down, drift), elapsed) = timed(|| {
        let up = minimize_heteroclinic(&h, &pair, Direction::Ascending, 40, &opts()).unwrap();
        let down = minimize_heteroclinic(&h, &pair, Direction::Descending, 40, &opts()).unwrap();
        let c = twist_core::genfun::estimate_lipschitz(&h, pair.u0, pair.u1);
        let drift = window_drift(&h, &up, &pair, c).unwrap();
        (up, down, drift)
    });
    let (c0, c1) = (up.orbit.value, down.orbit.value);
    let pass = up.orbit.converged
        && up.orbit.max_residual <= 1e-8
        && down.orbit.max_residual <= 1e-8
        && up.order.strictly_monotone()
        && c0 > 0.0
        && (c0 - c1).abs() <= 1e-8
        && drift.holds(1e-12)
        && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "residual {:.1e}, c0 {c0:.12}, |c0−c1| {:.1e}, drift excess {:.1e} over {} windows, {:.3}s",
            up.orbit.max_residual,
            (c0 - c1).abs(),
            drift.worst_excess,
            drift.checked,
            elapsed.as_secs_f64()
        ),
    )
}

fn phi() -> Outcome {
    let h = fk();
    let ladder = phi_ladder(&h, &unit_pair(), &[0.05, 0.1, 0.2], 20, &opts()).unwrap();
    let v: Vec<f64> = ladder.iter().map(|p| p.1).collect();
    outcome(
        v[0] > 0.0 && v[1] >= v[0] && v[2] >= v[1],
        format!(
            "φ̂(0.05) {:.6e}, φ̂(0.1) {:.6e}, φ̂(0.2) {:.6e}",
            v[0], v[1], v[2]
        ),
    )
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    while b - a > 1e-12 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    f((a + b) / 2.0)
}

/// `min_z h(ξ, z) + h(z, ξ′ + 1)` by a 201-point scan and golden refinement.
fn brute_h21(h: &FrenkelKontorova, xi: f64, xi_p: f64) -> f64 {
    let f = |z: f64| h.eval(xi, z) + h.eval(z, xi_p + 1.0);
    let (lo, hi) = (xi.min(xi_p + 1.0) - 1.0, xi.max(xi_p + 1.0) + 1.0);
    let step = (hi - lo) / 200.0;
    let k = (0..=200)
        .min_by(|&i, &j| f(lo + i as f64 * step).total_cmp(&f(lo + j as f64 * step)))
        .unwrap();
    let z = lo + k as f64 * step;
    golden_min(f, (z - step).max(lo), (z + step).min(hi))
}

fn conjunction() -> Outcome {
    let h = fk();
    let o = opts();
    let big = build_h(&h, 2, 1, &o).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        worst = worst.max((big.eval(a, b) - brute_h21(&h, a, b)).abs());
    }
    let (orbit, _) = find_periodic_minimizer(&big, 1, 0, &o).unwrap();
    let y = Configuration::new(0, vec![orbit.fundamental[0]; 11]).unwrap();
    let x = lift_configuration(&y, &h, 2, 1, &o).unwrap();
    let residual = max_abs(&stationary_residuals(&h, &x));
    let periodic = (x.start..=x.end() - 2).all(|i| (x.at(i + 2) - x.at(i) - 1.0).abs() <= 1e-12);
    let rho = rotation_number(&x).unwrap().0;
    outcome(
        worst <= 1e-9 && residual <= 1e-8 && periodic && rho == 0.5,
        format!("max |H − brute| {worst:.1e}, lift residual {residual:.1e}, (2,1)-periodic {periodic}, rotation {rho}"),
    )
}

/// Certified transition orbits collected for the dynamics cross-check.
#[derive(Default)]
struct Certified(Vec<(String, TransitionResult)>);

fn transitions(store: &mut Certified) -> Outcome {
    let h = fk();
    let pair = unit_pair();
    let (results, elapsed) = timed(|| {
        [2usize, 3]
            .map(|n| {
                let spec = TransitionSpec::uniform(n, 40, 0.05, 80, pair).unwrap();
                let r = minimize_transition(&h, &spec, &opts()).unwrap();
                (n, r)
            })
            .to_vec()
    });
    let mut pass = elapsed < Duration::from_secs(60);
    let mut parts = Vec::new();
    for (n, r) in results {
        let x = r.config();
        let dwell_dev = r
            .orbit
            .block_report
            .as_ref()
            .unwrap()
            .iter()
            .filter_map(|b| b.max_deviation)
            .fold(0.0, f64::max);
        let interior_strict = (x.start + 1..x.end())
            .filter(|i| !r.saturated_dwell.contains(i))
            .all(|i| x.at(i) > 0.0 && x.at(i) < 1.0);
        let in_box = x.values.iter().all(|&v| (0.0..=1.0).contains(&v));
        let j = r.orbit.value;
        let ok = r.certified
            && r.orbit.max_residual <= 1e-8
            && dwell_dev <= 0.05
            && interior_strict
            && in_box
            && r.broken_value.abs() <= 1e-10
            && j >= r.lower_bound - 1e-10
            && j <= 1e-10;
        pass &= ok;
        parts.push(format!(
            "n={n}: certified {}, residual {:.1e}, dwell dev {:.1e}, J {:.1e} in [{:.3}, 1e-10], broken J {:.1e}, {} rounding-saturated dwell entries",
            r.certified,
            r.orbit.max_residual,
            dwell_dev,
            j,
            r.lower_bound,
            r.broken_value,
            r.saturated_dwell.len()
        ));
        if r.certified {
            store.0.push((format!("{n}-transition"), r));
        }
    }
    parts.push(format!("{:.3}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join("; "))
}

fn one_sided(store: &mut Certified) -> Outcome {
    let h = fk();
    let sites: Vec<i64> = (-2..=2).map(|i| 40 * i).collect();
    let spec = build_one_sided_spec(0, 1, &sites, -2, &[0.05], 80, unit_pair()).unwrap();
    let r = minimize_transition(&h, &spec, &opts()).unwrap();
    let x = r.config();
    let rho0 = spec.turns[0].rho;
    let tail_dev = (x.start..=0).map(|i| x.at(i).abs()).fold(0.0, f64::max);
    let pass = spec.pattern == Pattern::OneSided { a: 0, b: 1 } && r.certified && tail_dev <= rho0;
    let detail = format!(
        "certified {}, residual {:.1e}, left tail [{}, 0] max |x − u⁰| {tail_dev:.1e} (ρ₀ = {rho0})",
        r.certified,
        r.orbit.max_residual,
        x.start
    );
    if r.certified {
        store.0.push(("one-sided".into(), r));
    }
    outcome(pass, detail)
}

fn family(store: &mut Certified) -> Outcome {
    let h = fk();
    let mut sites = vec![0i64];
    for i in 0..8 {
        sites.push(sites[i] + 40 + 4 * i as i64);
    }
    let base =
        TransitionSpec::with_pattern(&sites, 0, &[0.05], Pattern::Mod4, None, 80, unit_pair())
            .unwrap();
    let seqs = vec![vec![], vec![1], vec![0, 1], vec![2]];
    let report = enumerate_orbit_family(&h, &base, &seqs, DISTINCT_GAP, &opts()).unwrap();
    let certified = report.members.iter().filter(|m| m.result.certified).count();
    let pass = certified == 4 && report.min_pairwise_distance >= 0.4;
    let detail = format!(
        "{certified}/4 certified, min pairwise sup-distance {:.6} on window {:?}",
        report.min_pairwise_distance,
        base.window()
    );
    for m in report.members {
        if m.result.certified {
            store.0.push((format!("family {:?}", m.digits), m.result));
        }
    }
    outcome(pass, detail)
}

fn dynamics(store: &Certified) -> Outcome {
    let h = fk();
    let mut worst_identity = 0.0f64;
    let mut worst_map = 0.0f64;
    let mut failures = 0usize;
    for (_, r) in &store.0 {
        let x = r.config();
        let y = |i: i64| -h.partials(x.at(i), x.at(i + 1)).0;
        for i in x.start + 1..x.end() {
            let back = h.partials(x.at(i - 1), x.at(i)).1;
            worst_identity = worst_identity.max((y(i) - back).abs());
        }
        for i in x.start + 1..x.end() - 1 {
            match induced_map_auto(&h, MapPoint::new(x.at(i), y(i))) {
                Ok(q) => {
                    worst_map = worst_map
                        .max((q.x - x.at(i + 1)).abs())
                        .max((q.y - y(i + 1)).abs());
                }
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        !store.0.is_empty() && worst_identity <= 1e-8 && worst_map <= 1e-8 && failures == 0,
        format!(
            "{} certified orbits, identity err {worst_identity:.1e}, map step err {worst_map:.1e}, map failures {failures}",
            store.0.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut store = Certified::default();
    let results = vec![
        ("1 axiom suite", axioms()),
        ("2 oracle equivalence", oracle_segments()),
        ("3 neighboring pair and c", neighboring_pair()),
        ("4 heteroclinic", heteroclinic()),
        ("5 phi ladder", phi()),
        ("6 conjunction and H", conjunction()),
        ("7 transition construction", transitions(&mut store)),
        ("8 one-sided variant", one_sided(&mut store)),
        ("9 family distinctness", family(&mut store)),
        ("10 dynamics cross-check", dynamics(&store)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
