use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{GeneratingFunction, SecondPartials};
use crate::error::{Error, Result};

/// A period-1 on-site potential stored as a finite Fourier series
/// `V(x) = a₀ + Σ_k (a_k cos 2πkx + b_k sin 2πkx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    /// `cos` coefficients, index 0 is the constant term.
    pub cos: Vec<f64>,
    /// `sin` coefficients, index 0 is ignored.
    pub sin: Vec<f64>,
}

impl Potential {
    /// `V(x) = K/(2π)² · (1 − cos 2πmx)`.
    pub fn cosine(k: f64, mode: usize) -> Self {
        let mode = mode.max(1);
        let amp = k / (4.0 * PI * PI);
        let mut cos = vec![0.0; mode + 1];
        cos[0] = amp;
        cos[mode] = -amp;
        Potential {
            cos,
            sin: vec![0.0; mode + 1],
        }
    }

    pub fn zero() -> Self {
        Potential {
            cos: vec![0.0],
            sin: vec![0.0],
        }
    }

    /// Trigonometric interpolant through samples on the uniform grid
    /// `x_j = j/N`, `j = 0..N`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::Invalid("potential_samples is empty".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(
                "potential_samples contains non-finite values".into(),
            ));
        }
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let half = n / 2;
        let nf = n as f64;
        let mut cos = vec![0.0; half + 1];
        let mut sin = vec![0.0; half + 1];
        cos[0] = buf[0].re / nf;
        for k in 1..=half {
            // Nyquist term of an even grid is shared with its alias
            let w = if 2 * k == n { 1.0 } else { 2.0 };
            cos[k] = w * buf[k].re / nf;
            sin[k] = if 2 * k == n { 0.0 } else { -w * buf[k].im / nf };
        }
        Ok(Potential { cos, sin })
    }

    fn terms(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.cos
            .iter()
            .zip(self.sin.iter().chain(std::iter::repeat(&0.0)))
            .enumerate()
            .skip(1)
            .map(|(k, (&a, &b))| (2.0 * PI * k as f64, a, b))
    }

    pub fn value(&self, x: f64) -> f64 {
        self.cos[0]
            + self
                .terms()
                .map(|(w, a, b)| a * (w * x).cos() + b * (w * x).sin())
                .sum::<f64>()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.terms()
            .map(|(w, a, b)| w * (-a * (w * x).sin() + b * (w * x).cos()))
            .sum()
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.terms()
            .map(|(w, a, b)| -w * w * (a * (w * x).cos() + b * (w * x).sin()))
            .sum()
    }
}

/// Frenkel–Kontorova generating function
/// `h(ξ, η) = ½ {κ(ξ − η)² + V(ξ) + V(η)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrenkelKontorova {
    pub kappa: f64,
    pub potential: Potential,
}

impl FrenkelKontorova {
    /// Standard model with `V(x) = K/(2π)² (1 − cos 2πx)`.
    pub fn new(kappa: f64, k: f64) -> Result<Self> {
        Self::with_potential(kappa, Potential::cosine(k, 1))
    }

    pub fn with_potential(kappa: f64, potential: Potential) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Invalid(format!(
                "coupling kappa must be positive, got {kappa}"
            )));
        }
        Ok(FrenkelKontorova { kappa, potential })
    }

    /// Same functional form without the positivity requirement on `κ`;
    /// useful for exercising the axiom checks on models that violate them.
    pub fn coupled(kappa: f64, potential: Potential) -> Self {
        FrenkelKontorova { kappa, potential }
    }
}

impl GeneratingFunction for FrenkelKontorova {
    fn eval(&self, xi: f64, eta: f64) -> f64 {
        let d = xi - eta;
        0.5 * (self.kappa * d * d + (self.potential.value(xi) + self.potential.value(eta)))
    }

    fn partials(&self, xi: f64, eta: f64) -> (f64, f64) {
        let c = self.kappa * (xi - eta);
        (
            c + 0.5 * self.potential.derivative(xi),
            -c + 0.5 * self.potential.derivative(eta),
        )
    }

    fn second_partials(&self, xi: f64, eta: f64) -> SecondPartials {
        SecondPartials {
            d11: self.kappa + 0.5 * self.potential.second_derivative(xi),
            d12: -self.kappa,
            d22: self.kappa + 0.5 * self.potential.second_derivative(eta),
        }
    }

    fn twist_bound(&self) -> Option<f64> {
        (self.kappa > 0.0).then_some(self.kappa)
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{eval_h, eval_partials, fd_partials};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fk11() -> FrenkelKontorova {
        FrenkelKontorova::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        let h = fk11();
        assert_eq!(eval_h(&h, 0.0, 0.0).unwrap(), 0.0);
        // V(0.5) = 2K/(4π²), h = ½(0.25 + V(0.5))
        let expected = 0.125 + 1.0 / (4.0 * PI * PI);
        assert!((eval_h(&h, 0.0, 0.5).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.150330).abs() < 1e-6);
        let a = eval_h(&h, 1.3, 2.7).unwrap();
        let b = eval_h(&h, 0.3, 1.7).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(
            eval_h(&fk11(), f64::NAN, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_partials(&fk11(), 0.0, f64::INFINITY),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(eval_partials(&fk11(), 0.0, 0.0).unwrap(), (0.0, 0.0));
        let free = FrenkelKontorova::new(1.0, 0.0).unwrap();
        assert_eq!(eval_partials(&free, 0.0, 1.0).unwrap(), (-1.0, 1.0));
    }

    #[test]
    fn analytic_partials_match_central_differences() {
        let h = fk11();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let xi = rng.gen_range(-3.0..3.0);
            let eta = rng.gen_range(-3.0..3.0);
            let (a1, a2) = h.partials(xi, eta);
            let (f1, f2) = fd_partials(&h, xi, eta, 1e-5).unwrap();
            assert!((a1 - f1).abs() < 1e-6 && (a2 - f2).abs() < 1e-6);
        }
    }

    #[test]
    fn fd_step_underflow() {
        let err = fd_partials(&fk11(), 1e300, 0.0, 1e-5).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn potential_is_periodic() {
        let v = Potential::cosine(1.3, 2);
        for i in 0..50 {
            let x = -2.0 + 0.137 * i as f64;
            assert!((v.value(x + 1.0) - v.value(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn samples_reproduce_cosine_potential() {
        let v = Potential::cosine(1.0, 1);
        let n = 32;
        let samples: Vec<f64> = (0..n).map(|j| v.value(j as f64 / n as f64)).collect();
        let w = Potential::from_samples(&samples).unwrap();
        for i in 0..40 {
            let x = 0.0123 + 0.05 * i as f64;
            assert!((w.value(x) - v.value(x)).abs() < 1e-13);
            assert!((w.derivative(x) - v.derivative(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn samples_with_sine_and_nyquist() {
        // V(x) = sin 2πx + 0.5 cos 4πx (Nyquist for N = 4)
        let f = |x: f64| (2.0 * PI * x).sin() + 0.5 * (4.0 * PI * x).cos();
        let samples: Vec<f64> = (0..4).map(|j| f(j as f64 / 4.0)).collect();
        let w = Potential::from_samples(&samples).unwrap();
        for j in 0..4 {
            let x = j as f64 / 4.0;
            assert!((w.value(x) - f(x)).abs() < 1e-14);
        }
        assert!((w.sin[1] - 1.0).abs() < 1e-14);
    }
}
