use thiserror::Error;

/// Errors raised by the solvers and model constructors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("no sign change of the root function on [{lo}, {hi}]")]
    RootNotFound { lo: f64, hi: f64 },

    #[error("minimizer sits at the edge of the search bracket [{lo}, {hi}]")]
    BracketEdge { lo: f64, hi: f64 },

    #[error("no convergence after {sweeps} sweeps (max change {max_change:.3e}, max residual {max_residual:.3e})")]
    NotConverged {
        sweeps: usize,
        max_change: f64,
        max_residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("degenerate neighboring pair: {0}")]
    DegeneratePair(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
