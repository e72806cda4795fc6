//! Growth certificates: fit the smallest `C` with `|a| ≤ C · bound` on a grid,
//! then check that `C` settles when the grid is refined.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weight::WeightSpec;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub radius: f64,
    pub count: usize,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub form: String,
    pub constants: BTreeMap<String, f64>,
    /// `max (log|a| − log(C·bound))` with the reported constants; `≤ 0` up to rounding.
    pub max_violation: f64,
    /// One entry per refinement level.
    pub grids: Vec<GridMeta>,
    /// The fitted constant at each refinement level.
    pub refinement: Vec<f64>,
    pub pass: bool,
}

/// Cartesian grid on `[−R, R]` for each real coordinate of `(z, w) ∈ ℂ^d × ℂ^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertGrid {
    pub radius: f64,
    /// Points per real axis.
    pub count: usize,
}

impl Default for CertGrid {
    fn default() -> Self {
        Self { radius: 4.0, count: 17 }
    }
}

impl CertGrid {
    /// Twice the points on a 25% wider box.
    pub fn refined(&self) -> Self {
        Self { radius: self.radius * 1.25, count: 2 * self.count - 1 }
    }

    pub fn axis(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![0.0];
        }
        (0..self.count).map(|i| -self.radius + 2.0 * self.radius * i as f64 / (self.count - 1) as f64).collect()
    }

    fn meta(&self, d: usize) -> GridMeta {
        GridMeta { radius: self.radius, count: self.count, points: self.count.pow(4 * d as u32) }
    }

    /// Calls `f(z, w)` on every grid point and folds with `max`.
    pub fn max_over<F>(&self, d: usize, f: F) -> f64
    where
        F: Fn(&[Complex64], &[Complex64]) -> f64 + Sync,
    {
        let axis = self.axis();
        let n = axis.len();
        let k = 4 * d;
        let total = n.pow(k as u32);
        (0..total)
            .into_par_iter()
            .map(|mut flat| {
                let mut coords = vec![0.0; k];
                for c in coords.iter_mut() {
                    *c = axis[flat % n];
                    flat /= n;
                }
                let z: Vec<Complex64> = (0..d).map(|j| Complex64::new(coords[2 * j], coords[2 * j + 1])).collect();
                let w: Vec<Complex64> =
                    (0..d).map(|j| Complex64::new(coords[2 * d + 2 * j], coords[2 * d + 2 * j + 1])).collect();
                f(&z, &w)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
}

/// Target inequalities for Wick symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GrowthForm {
    /// `e^{½|z−w|²} ω(√2 z̄) ⟨z−w⟩^{−N}`.
    ShubinBargmann { weight: WeightSpec, n: f64 },
    /// `exp(½|z−w|² + r₁|z+w|_{s,σ} − r₂|z−w|_{s,σ})`, `|z|_{s,σ} = |Re z|^{1/s} + |Im z|^{1/σ}`.
    Gevrey { r1: f64, r2: f64, s: f64, sigma: f64 },
}

fn gevrey_norm(v: &[Complex64], s: f64, sigma: f64) -> f64 {
    v.iter().map(|c| c.re.abs().powf(1.0 / s) + c.im.abs().powf(1.0 / sigma)).sum()
}

impl GrowthForm {
    pub fn id(&self) -> &'static str {
        match self {
            Self::ShubinBargmann { .. } => "shubin_bargmann",
            Self::Gevrey { .. } => "gevrey",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::ShubinBargmann { weight, n } => {
                weight.validate()?;
                if !n.is_finite() {
                    return Err(Error::Malformed("order N must be finite".into()));
                }
                Ok(())
            }
            Self::Gevrey { r1, r2, s, sigma } => {
                if [r1, r2, s, sigma].iter().any(|v| !v.is_finite()) || *s <= 0.0 || *sigma <= 0.0 {
                    return Err(Error::Malformed("Gevrey parameters must be finite with s, σ > 0".into()));
                }
                Ok(())
            }
        }
    }

    /// `log bound(z, w)`.
    pub fn ln_bound(&self, z: &[Complex64], w: &[Complex64]) -> f64 {
        let diff: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| a - b).collect();
        let dz2: f64 = diff.iter().map(Complex64::norm_sqr).sum();
        match self {
            Self::ShubinBargmann { weight, n } => {
                let z2: f64 = z.iter().map(Complex64::norm_sqr).sum();
                0.5 * dz2 + weight.ln_at_norm_sqr(2.0 * z2) - 0.5 * n * dz2.ln_1p()
            }
            Self::Gevrey { r1, r2, s, sigma } => {
                let sum: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| a + b).collect();
                0.5 * dz2 + r1 * gevrey_norm(&sum, *s, *sigma) - r2 * gevrey_norm(&diff, *s, *sigma)
            }
        }
    }
}

/// Fits `C = max |a| / bound` on the grid and once more on a refined grid.
/// Passes when `C` is finite and the two values differ by less than `ratio`.
pub fn growth_certificate<A>(a: A, dim: usize, form: &GrowthForm, grid: &CertGrid, ratio: f64) -> Result<EstimateReport>
where
    A: Fn(&[Complex64], &[Complex64]) -> Complex64 + Sync,
{
    form.validate()?;
    if grid.count == 0 {
        return Err(Error::EmptyGrid);
    }
    let levels = [*grid, grid.refined()];
    let slack = |z: &[Complex64], w: &[Complex64]| {
        let v = a(z, w).norm();
        if v == 0.0 {
            f64::NEG_INFINITY
        } else {
            v.ln() - form.ln_bound(z, w)
        }
    };
    let logs: Vec<f64> = levels.iter().map(|g| g.max_over(dim, slack)).collect();
    let consts: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
    let (c0, c1) = (consts[0], consts[1]);
    let stable = c0.is_finite() && c1.is_finite() && (c0 == c1 || (c0 > 0.0 && (c1 / c0).max(c0 / c1) < ratio));
    let mut constants = BTreeMap::new();
    constants.insert("C".to_string(), c1);
    match form {
        GrowthForm::ShubinBargmann { n, .. } => {
            constants.insert("N".to_string(), *n);
        }
        GrowthForm::Gevrey { r1, r2, .. } => {
            constants.insert("r1".to_string(), *r1);
            constants.insert("r2".to_string(), *r2);
        }
    }
    Ok(EstimateReport {
        form: form.id().to_string(),
        constants,
        max_violation: logs[1] - c1.ln(),
        grids: levels.iter().map(|g| g.meta(dim)).collect(),
        refinement: consts,
        pass: stable,
    })
}
