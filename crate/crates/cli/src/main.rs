//! `twist-orbit`: command-line front end for the twist-core solvers.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twist_core::minimize::Direction;

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const SOLVER: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const UNCERTIFIED: u8 = 3;
}

#[derive(Parser, Debug)]
#[command(
    name = "twist-orbit",
    version,
    about = "Minimal, periodic and transition orbits of monotone twist maps"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Model JSON, e.g. {"kind":"fk","kappa":1.0,"K":1.0}. Defaults to FK with κ = K = 1.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Directory for result files and the run manifest.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_sweeps: usize,
    /// Starts per solve; extra starts are seeded random perturbations.
    #[arg(long, global = true, default_value_t = 1)]
    pub multistart: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the standing hypotheses on the model.
    Check {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Heteroclinic kink between the neighboring pair on the window −N..=N.
    Hetero {
        #[arg(long = "n", default_value_t = 40)]
        n_half: usize,
        #[arg(long, default_value = "ascending")]
        direction: Direction,
    },
    /// Multi-transition orbit from a spec file.
    Transition {
        #[arg(long)]
        spec: PathBuf,
        /// Grow the spacing by factors of 1.5 until the orbit certifies.
        #[arg(long)]
        auto_spacing: bool,
        #[arg(long, default_value_t = 8)]
        max_rounds: usize,
    },
    /// Minimal (q, p)-periodic configuration.
    Periodic {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        p: i64,
    },
    /// Gap-function estimates φ̂(δ).
    Phi {
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Table of the reduced generating function H against a brute-force scan.
    Conjunction {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Orbit family indexed by digit sequences on a base spec.
    Family {
        #[arg(long)]
        spec: PathBuf,
        /// Digit sequences separated by ';', digits by ','; "" is the empty sequence.
        #[arg(long, default_value = ";1;0,1;2")]
        digits: String,
        #[arg(long, default_value_t = twist_core::transition::DISTINCT_GAP)]
        threshold: f64,
    },
    /// Cross-check a configuration CSV against the induced map.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = output::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit::INPUT);
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
