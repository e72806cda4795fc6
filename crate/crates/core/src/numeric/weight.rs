use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight functions on phase space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `⟨z⟩^s = (1 + |z|²)^{s/2}`.
    Polynomial { s: f64 },
    /// `e^{r|z|^{1/s}}`; only meaningful in Gevrey certificates.
    Exponential { r: f64, s: f64 },
}

impl WeightSpec {
    pub fn one() -> Self {
        Self::Polynomial { s: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Polynomial { s } if s.is_finite() => Ok(()),
            Self::Exponential { r, s } if r.is_finite() && s.is_finite() && s > 0.0 => Ok(()),
            _ => Err(Error::Malformed(format!("invalid weight {self:?}"))),
        }
    }

    /// Value at a point with `|z|² = norm_sqr`.
    pub fn at_norm_sqr(&self, norm_sqr: f64) -> f64 {
        match *self {
            Self::Polynomial { s } => (1.0 + norm_sqr).powf(s / 2.0),
            Self::Exponential { r, s } => (r * norm_sqr.sqrt().powf(1.0 / s)).exp(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> f64 {
        self.at_norm_sqr(z.iter().map(Complex64::norm_sqr).sum())
    }

    /// `log ω`, safe for large arguments.
    pub fn ln_at_norm_sqr(&self, norm_sqr: f64) -> f64 {
        match *self {
            Self::Polynomial { s } => 0.5 * s * norm_sqr.ln_1p(),
            Self::Exponential { r, s } => r * norm_sqr.sqrt().powf(1.0 / s),
        }
    }
}

/// `⟨z⟩ = (1 + |z|²)^{1/2}`.
pub fn japanese(z: &[Complex64]) -> f64 {
    (1.0 + z.iter().map(Complex64::norm_sqr).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_weight_is_moderate() {
        // Peetre: ⟨x+y⟩^s ≤ 2^{|s|} ⟨x⟩^s ⟨y⟩^{|s|}.
        for s in [-2.0, -0.5, 1.0, 3.0] {
            let w = WeightSpec::Polynomial { s };
            for (x, y) in [(0.3, -4.0), (7.0, 2.0), (-1.5, 1.5)] {
                let lhs = w.at_norm_sqr((x + y) * (x + y));
                let rhs = 2f64.powf(f64::abs(s)) * w.at_norm_sqr(x * x) * (1.0 + y * y).powf(f64::abs(s) / 2.0);
                assert!(lhs <= rhs * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn log_matches_value() {
        let w = WeightSpec::Exponential { r: 0.5, s: 2.0 };
        assert!((w.ln_at_norm_sqr(9.0) - w.at_norm_sqr(9.0).ln()).abs() < 1e-12);
        assert!(WeightSpec::Exponential { r: 1.0, s: 0.0 }.validate().is_err());
    }
}
