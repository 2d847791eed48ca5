use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use twist_core::config::{format_real, max_abs, stationary_residuals};
use twist_core::genfun::{check_axioms, induced_map_auto, AxiomOptions};
use twist_core::minimize::{
    build_h, conjunction, find_neighboring_pair, find_periodic_minimizer, minimize_heteroclinic,
    phi_ladder, window_drift,
};
use twist_core::transition::{
    enumerate_orbit_family, minimize_transition, minimize_transition_auto, Pattern,
    TransitionResult,
};
use twist_core::{
    Configuration, Error, FrenkelKontorova, GeneratingFunction, MapPoint, MinimizeOptions,
    ModelSpec, NeighboringPair, TransitionSpec,
};

use crate::output::Output;
use crate::{exit, Cli, Command, Global};

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::Parse(_) | Error::Domain(_) | Error::Io(_) => exit::INPUT,
            _ => exit::SOLVER,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn load_model(g: &Global) -> Result<(ModelSpec, FrenkelKontorova), Failure> {
    let spec = match &g.model {
        Some(p) => ModelSpec::from_json(&read_input(p)?)?,
        None => ModelSpec::fk(1.0, 1.0),
    };
    let h = spec.build()?;
    Ok((spec, h))
}

fn options(g: &Global) -> Result<MinimizeOptions, Failure> {
    let o = MinimizeOptions {
        tol: g.tol,
        max_sweeps: g.max_sweeps,
        multistart: g.multistart,
        seed: g.seed,
    };
    o.validate()?;
    Ok(o)
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let (model, h) = load_model(g)?;
    let opts = options(g)?;
    let mut out = Output::new(g.out.as_deref());
    let (name, args, code) = match &cli.command {
        Command::Check { samples } => (
            "check",
            json!({ "samples": samples }),
            check(&h, *samples, g.seed, &mut out),
        ),
        Command::Hetero { n_half, direction } => (
            "hetero",
            json!({ "n": n_half, "direction": direction }),
            hetero(&h, *n_half, *direction, &opts, &mut out)?,
        ),
        Command::Transition {
            spec,
            auto_spacing,
            max_rounds,
        } => {
            let text = read_input(spec)?;
            (
                "transition",
                json!({ "spec": parse_json(&text)?, "auto_spacing": auto_spacing, "max_rounds": max_rounds }),
                transition(&h, &text, *auto_spacing, *max_rounds, &opts, &mut out)?,
            )
        }
        Command::Periodic { q, p } => (
            "periodic",
            json!({ "q": q, "p": p }),
            periodic(&h, *q, *p, &opts, &mut out)?,
        ),
        Command::Phi { deltas, n_max } => (
            "phi",
            json!({ "deltas": deltas, "n_max": n_max }),
            phi(&h, deltas, *n_max, &opts, &mut out)?,
        ),
        Command::Conjunction { q, p, samples } => (
            "conjunction",
            json!({ "q": q, "p": p, "samples": samples }),
            conjunction_table(&h, *q, *p, *samples, g.seed, &opts, &mut out)?,
        ),
        Command::Family {
            spec,
            digits,
            threshold,
        } => {
            let text = read_input(spec)?;
            (
                "family",
                json!({ "spec": parse_json(&text)?, "digits": digits, "threshold": threshold }),
                family(&h, &text, digits, *threshold, &opts, &mut out)?,
            )
        }
        Command::Simulate { config, tolerance } => {
            let c = Configuration::read_csv(read_input(config)?.as_bytes())?;
            (
                "simulate",
                json!({ "config": c, "tolerance": tolerance }),
                simulate(&h, &c, *tolerance, &mut out)?,
            )
        }
    };
    let options = json!({
        "tol": opts.tol,
        "max_sweeps": opts.max_sweeps,
        "multistart": opts.multistart,
        "args": args,
    });
    let model = serde_json::to_value(&model).expect("model serializes");
    out.finish(name, model, options, g.seed)?;
    Ok(code)
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::new(exit::INPUT, format!("parse error: {e}")))
}

fn pair_of(h: &FrenkelKontorova, opts: &MinimizeOptions) -> Result<NeighboringPair, Failure> {
    Ok(find_neighboring_pair(h, opts)?)
}

fn check(h: &FrenkelKontorova, samples: usize, seed: u64, out: &mut Output) -> u8 {
    let report = check_axioms(h, samples, seed, &AxiomOptions::default());
    for c in &report.checks {
        let status = match (c.passed, c.required) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fail (not required)",
        };
        println!("{:<10} {status:<20} {}", c.name, c.detail);
    }
    out.add_json("axioms.json", &report);
    if report.all_passed() {
        exit::OK
    } else {
        println!("failed: {}", report.failed().join(", "));
        exit::SOLVER
    }
}

fn hetero(
    h: &FrenkelKontorova,
    n_half: usize,
    direction: twist_core::minimize::Direction,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    let pair = pair_of(h, opts)?;
    let kink = minimize_heteroclinic(h, &pair, direction, n_half, opts)?;
    let lipschitz = twist_core::genfun::estimate_lipschitz(h, pair.u0, pair.u1);
    let drift = window_drift(h, &kink, &pair, lipschitz)?;
    let label = match direction {
        twist_core::minimize::Direction::Ascending => "c0",
        twist_core::minimize::Direction::Descending => "c1",
    };
    println!("{label} = {}", format_real(kink.orbit.value));
    println!("max residual = {:.3e}", kink.orbit.max_residual);
    println!("strictly monotone = {}", kink.order.strictly_monotone());
    out.add("kink.csv", kink.orbit.config.to_csv_string());
    out.add_json(
        "kink.json",
        &json!({ "result": kink, "window_drift": drift }),
    );
    if kink.orbit.max_residual > 1e-8 {
        eprintln!("residual {:.3e} exceeds 1e-8", kink.orbit.max_residual);
        return Ok(exit::SOLVER);
    }
    Ok(exit::OK)
}

fn report_transition(r: &TransitionResult, spec: &TransitionSpec) {
    println!("certified = {}", r.certified);
    println!("J = {}", format_real(r.orbit.value));
    println!("broken J = {}", format_real(r.broken_value));
    println!("lower bound = {}", format_real(r.lower_bound));
    println!("max residual = {:.3e}", r.orbit.max_residual);
    if let Pattern::OneSided { a, b } = spec.pattern {
        let u = spec.pair.target(a == 1);
        let x = r.config();
        let tail: Vec<i64> = (x.start..=x.end())
            .filter(|&i| (b as i64) * i < 0)
            .collect();
        let dev = tail
            .iter()
            .map(|&i| (x.at(i) - u).abs())
            .fold(0.0, f64::max);
        println!(
            "one-sided tail: {} indices, max |x - u^{a}| = {dev:.3e}",
            tail.len()
        );
    }
    if !r.certified {
        eprintln!(
            "active constraints (turn labels): {:?}",
            r.orbit.active_constraints
        );
        eprintln!("box contacts: {:?}", r.box_contacts);
    }
}

fn transition(
    h: &FrenkelKontorova,
    text: &str,
    auto: bool,
    max_rounds: usize,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    let pair = pair_of(h, opts)?;
    let spec = TransitionSpec::from_json(text, pair)?;
    let (spec, result) = if auto {
        let a = minimize_transition_auto(h, &spec, max_rounds, opts)?;
        for (f, ok) in &a.attempts {
            println!("spacing factor {f}: certified = {ok}");
        }
        (a.spec, a.result)
    } else {
        let r = minimize_transition(h, &spec, opts)?;
        (spec, r)
    };
    report_transition(&result, &spec);
    out.add("transition.csv", result.config().to_csv_string());
    out.add_json(
        "transition.json",
        &json!({ "spec": spec, "result": result }),
    );
    Ok(if result.certified {
        exit::OK
    } else {
        exit::UNCERTIFIED
    })
}

fn periodic(
    h: &FrenkelKontorova,
    q: usize,
    p: i64,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    let (orbit, value) = find_periodic_minimizer(h, q, p, opts)?;
    let window = orbit.extend(0, 2 * q);
    let residual = max_abs(&stationary_residuals(h, &window));
    println!("action per period = {}", format_real(value));
    println!("max residual = {residual:.3e}");
    out.add("periodic.csv", orbit.extend(0, q).to_csv_string());
    out.add_json(
        "periodic.json",
        &json!({ "orbit": orbit, "value": value, "max_residual": residual }),
    );
    Ok(exit::OK)
}

fn phi(
    h: &FrenkelKontorova,
    deltas: &[f64],
    n_max: usize,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    let pair = pair_of(h, opts)?;
    let ladder = phi_ladder(h, &pair, deltas, n_max, opts)?;
    let mut csv = String::from("delta,phi\n");
    for (d, v) in &ladder {
        println!("phi({d}) = {}", format_real(*v));
        csv.push_str(&format!("{},{}\n", format_real(*d), format_real(*v)));
    }
    out.add("phi.csv", csv);
    Ok(exit::OK)
}

fn conjunction_table(
    h: &FrenkelKontorova,
    q: usize,
    p: i64,
    samples: usize,
    seed: u64,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    use rand::{Rng, SeedableRng};
    let big = build_h(h, q, p, opts)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("xi,xi_prime,H,brute,diff\n");
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let v = big.eval(a, b);
        let brute = if q == 2 {
            Some(conjunction(h, h, a, b + p as f64, None)?.value)
        } else {
            None
        };
        let diff = brute.map(|r| (v - r).abs());
        worst = worst.max(diff.unwrap_or(0.0));
        let fmt = |x: Option<f64>| x.map(format_real).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            format_real(a),
            format_real(b),
            format_real(v),
            fmt(brute),
            fmt(diff)
        ));
    }
    if q == 2 {
        println!("max |H - brute force| = {worst:.3e} over {samples} samples");
    } else {
        println!("brute-force comparison is only tabulated for q = 2");
    }
    out.add("conjunction.csv", csv);
    Ok(exit::OK)
}

fn parse_digits(s: &str) -> Result<Vec<Vec<u32>>, Failure> {
    s.split(';')
        .map(|seq| {
            seq.split(',')
                .map(str::trim)
                .filter(|d| !d.is_empty())
                .map(|d| {
                    d.parse::<u32>()
                        .map_err(|e| Failure::new(exit::INPUT, format!("bad digit {d:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

fn family(
    h: &FrenkelKontorova,
    text: &str,
    digits: &str,
    threshold: f64,
    opts: &MinimizeOptions,
    out: &mut Output,
) -> Outcome {
    let pair = pair_of(h, opts)?;
    let base = TransitionSpec::from_json(text, pair)?;
    let seqs = parse_digits(digits)?;
    let report = enumerate_orbit_family(h, &base, &seqs, threshold, opts)?;
    for (k, m) in report.members.iter().enumerate() {
        println!(
            "member {k} digits {:?}: certified = {}, J = {}",
            m.digits,
            m.result.certified,
            format_real(m.result.orbit.value)
        );
        out.add(
            &format!("member_{k}.csv"),
            m.result.config().to_csv_string(),
        );
    }
    println!(
        "min pairwise sup-distance = {:.6}",
        report.min_pairwise_distance
    );
    out.add_json("family.json", &report);
    Ok(if report.all_certified && report.distinct {
        exit::OK
    } else {
        exit::UNCERTIFIED
    })
}

fn simulate(h: &FrenkelKontorova, c: &Configuration, tolerance: f64, out: &mut Output) -> Outcome {
    if c.len() < 4 {
        return Err(Failure::new(
            exit::INPUT,
            "simulate needs at least 4 entries",
        ));
    }
    let y = |i: i64| -h.partials(c.at(i), c.at(i + 1)).0;
    let mut csv = String::from("i,x,y,identity_err,map_err\n");
    let mut worst = 0.0f64;
    for i in c.start + 1..c.end() - 1 {
        let identity = (y(i) - h.partials(c.at(i - 1), c.at(i)).1).abs();
        let q = induced_map_auto(h, MapPoint::new(c.at(i), y(i)))?;
        let map_err = (q.x - c.at(i + 1)).abs().max((q.y - y(i + 1)).abs());
        worst = worst.max(identity).max(map_err);
        csv.push_str(&format!(
            "{i},{},{},{},{}\n",
            format_real(c.at(i)),
            format_real(y(i)),
            format_real(identity),
            format_real(map_err)
        ));
    }
    println!("max step error = {worst:.3e}");
    out.add("simulate.csv", csv);
    Ok(if worst <= tolerance {
        exit::OK
    } else {
        exit::SOLVER
    })
}
