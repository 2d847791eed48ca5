use serde::{Deserialize, Serialize};

use super::{FrenkelKontorova, GeneratingFunction, Potential};
use crate::error::{Error, Result};

fn default_kappa() -> f64 {
    1.0
}

fn default_mode() -> usize {
    1
}

/// JSON model description.
///
/// ```json
/// {"kind":"fk","kappa":1.0,"K":1.0}
/// {"kind":"fk","kappa":1.0,"potential_samples":[0.0, 0.1, 0.2, 0.1]}
/// ```
///
/// `"coupled"` accepts the same fields but skips the `κ > 0` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default = "default_mode")]
    pub mode: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_samples: Option<Vec<f64>>,
}

impl ModelSpec {
    pub fn fk(kappa: f64, k: f64) -> Self {
        ModelSpec {
            kind: "fk".into(),
            kappa,
            k: Some(k),
            mode: 1,
            potential_samples: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<FrenkelKontorova> {
        let potential = match (&self.potential_samples, self.k) {
            (Some(_), Some(_)) => {
                return Err(Error::Invalid(
                    "give either K or potential_samples, not both".into(),
                ))
            }
            (Some(s), None) => Potential::from_samples(s)?,
            (None, k) => {
                let k = k.unwrap_or(0.0);
                if !(k >= 0.0) || !k.is_finite() {
                    return Err(Error::Invalid(format!("K must be nonnegative, got {k}")));
                }
                Potential::cosine(k, self.mode)
            }
        };
        match self.kind.as_str() {
            "fk" => FrenkelKontorova::with_potential(self.kappa, potential),
            "coupled" => Ok(FrenkelKontorova::coupled(self.kappa, potential)),
            other => Err(Error::Invalid(format!("unknown model kind {other:?}"))),
        }
    }
}

/// Generating function given by a closure; derivatives use central
/// differences.
pub struct FnGeneratingFunction<F> {
    f: F,
    symmetric: bool,
}

impl<F: Fn(f64, f64) -> f64 + Send + Sync> FnGeneratingFunction<F> {
    pub fn new(f: F) -> Self {
        FnGeneratingFunction {
            f,
            symmetric: false,
        }
    }

    pub fn symmetric(f: F) -> Self {
        FnGeneratingFunction { f, symmetric: true }
    }
}

impl<F: Fn(f64, f64) -> f64 + Send + Sync> GeneratingFunction for FnGeneratingFunction<F> {
    fn eval(&self, xi: f64, eta: f64) -> f64 {
        (self.f)(xi, eta)
    }

    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}
