//! Sphere and shell sampling for ellipticity-type lower bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transforms::wick_diagonal_real;
use crate::error::{Error, Result};
use crate::numeric::weight::{japanese, WeightSpec};
use crate::symalg::{MultiIndex, WeylSymbol, WickSymbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EllipticityKind {
    Elliptic,
    WeaklyElliptic { rho0: f64 },
    Hypoelliptic { rho: f64, rho0: f64 },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub kind: EllipticityKind,
    /// Smallest modulus found (on the unit sphere, or on the shell grid for
    /// the hypoelliptic diagnostic).
    pub min_sphere_value: f64,
    /// Real coordinates `(x, ξ)` of the minimizer.
    pub argmin: Vec<f64>,
    pub threshold: f64,
    pub samples: usize,
    /// Real-valued and strictly positive on the sphere.
    pub positive: bool,
    pub radii: Vec<f64>,
    pub weight: Option<WeightSpec>,
    pub rho: Option<f64>,
    pub rho0: Option<f64>,
    pub upper_constant: Option<f64>,
    pub lower_constant: Option<f64>,
    pub fitted_rho0: Option<f64>,
}

impl EllipticityReport {
    pub fn is_elliptic(&self) -> bool {
        self.kind == EllipticityKind::Elliptic
    }

    pub fn passed(&self) -> bool {
        self.kind != EllipticityKind::Fail
    }
}

/// A homogeneous principal part, read on the unit sphere of `ℝ^{2d} ≅ ℂ^d`.
#[derive(Clone, Copy, Debug)]
pub enum PrincipalPart<'a> {
    Weyl(&'a WeylSymbol),
    /// Evaluated on the diagonal `z ↦ a(z, z)`.
    WickDiagonal(&'a WickSymbol),
}

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    acc
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Deterministic quasi-uniform points on `S^{n−1} ⊂ ℝ^n` (`n` even):
/// Halton points pushed through Box–Muller, then normalized.
pub fn sphere_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(n.is_multiple_of(2) && n <= PRIMES.len(), "sphere dimension must be even and at most {}", PRIMES.len());
    if n == 2 {
        // The circle gets an exact equispaced grid.
        return (0..count)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    (1..=count as u64)
        .map(|i| {
            let mut y = Vec::with_capacity(n);
            for k in 0..n / 2 {
                let u1 = radical_inverse(i, PRIMES[2 * k]).max(f64::MIN_POSITIVE);
                let u2 = radical_inverse(i, PRIMES[2 * k + 1]);
                let r = (-2.0 * u1.ln()).sqrt();
                let t = std::f64::consts::TAU * u2;
                y.push(r * t.cos());
                y.push(r * t.sin());
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            // Reorder from interleaved pairs to (x₁…x_d, ξ₁…ξ_d).
            let d = n / 2;
            let mut out = vec![0.0; n];
            for k in 0..d {
                out[k] = y[2 * k] / norm;
                out[d + k] = y[2 * k + 1] / norm;
            }
            out
        })
        .collect()
}

/// A polynomial in real variables together with its gradient.
struct RealField {
    p: WeylSymbol,
    grad: Vec<WeylSymbol>,
}

impl RealField {
    fn new(p: WeylSymbol) -> Self {
        let d = p.dim();
        let grad = (0..2 * d)
            .map(|k| {
                if k < d {
                    p.diff_first(&MultiIndex::unit(d, k)).expect("dimension")
                } else {
                    p.diff_second(&MultiIndex::unit(d, k - d)).expect("dimension")
                }
            })
            .collect();
        Self { p, grad }
    }

    fn split(y: &[f64]) -> (&[f64], &[f64]) {
        y.split_at(y.len() / 2)
    }

    fn value(&self, y: &[f64]) -> Complex64 {
        let (x, xi) = Self::split(y);
        self.p.eval_real(x, xi).expect("dimension")
    }

    fn gradient(&self, y: &[f64]) -> Vec<Complex64> {
        let (x, xi) = Self::split(y);
        self.grad.iter().map(|g| g.eval_real(x, xi).expect("dimension")).collect()
    }

    /// Damped Gauss–Newton on `|p|²` restricted to the sphere.
    fn refine(&self, start: &[f64]) -> (Vec<f64>, f64) {
        let n = start.len();
        let mut y = start.to_vec();
        let mut f = self.value(&y).norm();
        for _ in 0..60 {
            if f == 0.0 {
                break;
            }
            let v = self.value(&y);
            let g = self.gradient(&y);
            let mut j = DMatrix::<f64>::zeros(2, n);
            for k in 0..n {
                j[(0, k)] = g[k].re;
                j[(1, k)] = g[k].im;
            }
            let yv = DVector::from_column_slice(&y);
            let proj = DMatrix::<f64>::identity(n, n) - &yv * yv.transpose();
            let jp = &j * &proj;
            let Ok(pinv) = jp.clone().pseudo_inverse(1e-14) else { break };
            let step = -(pinv * DVector::from_column_slice(&[v.re, v.im]));
            let mut t = 1.0;
            let mut improved = false;
            while t > 1e-6 {
                let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a + t * b).collect();
                let norm = trial.iter().map(|v| v * v).sum::<f64>().sqrt();
                let trial: Vec<f64> = trial.iter().map(|v| v / norm).collect();
                let ft = self.value(&trial).norm();
                if ft < f {
                    y = trial;
                    f = ft;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        (y, f)
    }
}

const REFINE_SEEDS: usize = 16;

/// Minimum of `|p|` on the unit sphere; elliptic iff it exceeds
/// `tol · Σ|coefficients|`.
pub fn elliptic_check(part: PrincipalPart<'_>, samples: usize, tol: f64) -> Result<EllipticityReport> {
    if samples < 1000 {
        return Err(Error::Precondition(format!("need at least 1000 sphere samples, got {samples}")));
    }
    let p = match part {
        PrincipalPart::Weyl(w) => {
            w.ensure_homogeneous()?;
            w.clone()
        }
        PrincipalPart::WickDiagonal(a) => {
            a.ensure_homogeneous()?;
            wick_diagonal_real(a)
        }
    };
    let d = p.dim();
    let threshold = tol * p.coeff_l1().max(f64::MIN_POSITIVE);
    let field = RealField::new(p);
    let pts = sphere_points(2 * d, samples);
    let vals: Vec<Complex64> = pts.par_iter().map(|y| field.value(y)).collect();

    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| vals[a].norm().total_cmp(&vals[b].norm()));
    let (argmin, min) = order
        .par_iter()
        .take(REFINE_SEEDS)
        .map(|&k| field.refine(&pts[k]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one seed");

    let elliptic = min > threshold;
    let max_imag = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let real_valued = max_imag <= threshold;
    // A real function with no zero on the connected sphere has constant sign.
    let positive = elliptic && real_valued && vals[0].re > 0.0;
    Ok(EllipticityReport {
        kind: if elliptic { EllipticityKind::Elliptic } else { EllipticityKind::Fail },
        min_sphere_value: min,
        argmin,
        threshold,
        samples,
        positive,
        radii: vec![1.0],
        weight: None,
        rho: None,
        rho0: None,
        upper_constant: None,
        lower_constant: None,
        fitted_rho0: None,
    })
}

/// Shell grid `R_min ≤ |z| ≤ R_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub radial: usize,
    /// Points per shell; for `d = 1` a multiple of 4 puts samples on both axes.
    pub angular: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self { r_min: 1.0, r_max: 20.0, radial: 20, angular: 64 }
    }
}

impl RadialGrid {
    pub fn radii(&self) -> Vec<f64> {
        if self.radial == 1 {
            return vec![self.r_min];
        }
        (0..self.radial)
            .map(|k| self.r_min + (self.r_max - self.r_min) * k as f64 / (self.radial - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypoParams {
    pub rho: f64,
    pub rho0: f64,
    pub weight: WeightSpec,
    /// Highest derivative order `|α + β|` probed.
    pub order: usize,
    pub tol: f64,
}

/// Probes the two hypoellipticity inequalities on a shell grid:
/// `|∂_z^α ∂_w̄^β a(z,z)| ≤ C |a(z,z)| ⟨z⟩^{−ρ|α+β|}` and
/// `|a(z,z)| ≥ c ω(√2 z̄) ⟨z⟩^{−ρ₀}`, reporting the fitted `C` and `c`.
pub fn hypoelliptic_diagnostic(a: &WickSymbol, params: &HypoParams, grid: &RadialGrid) -> Result<EllipticityReport> {
    if params.rho <= 0.0 || params.rho0 < 0.0 {
        return Err(Error::Precondition(format!("need ρ > 0 and ρ₀ ≥ 0, got ρ = {}, ρ₀ = {}", params.rho, params.rho0)));
    }
    if grid.r_min <= 0.0 || grid.r_max < grid.r_min {
        return Err(Error::Precondition(format!("invalid radial range [{}, {}]", grid.r_min, grid.r_max)));
    }
    params.weight.validate()?;
    if grid.radial == 0 || grid.angular == 0 {
        return Err(Error::EmptyGrid);
    }
    let d = a.dim();
    let dirs = sphere_points(2 * d, grid.angular);
    let mut derivs = Vec::new();
    for n in 1..=params.order {
        for alpha in MultiIndex::up_to_degree(d, n) {
            for beta in MultiIndex::of_degree(d, n - alpha.total()) {
                let p = a.diff_first(&alpha)?.diff_second(&beta)?;
                derivs.push((n, p));
            }
        }
    }
    let radii = grid.radii();

    struct Shell {
        upper: f64,
        lower: f64,
        min_abs: f64,
        argmin: Vec<f64>,
    }
    let shells: Vec<Shell> = radii
        .par_iter()
        .map(|&r| {
            let mut s = Shell { upper: 0.0, lower: f64::INFINITY, min_abs: f64::INFINITY, argmin: Vec::new() };
            for dir in &dirs {
                let z: Vec<Complex64> = (0..d).map(|j| Complex64::new(r * dir[j], r * dir[d + j])).collect();
                let av = a.eval(&z, &z).expect("dimension").norm();
                let jz = japanese(&z);
                let omega = params.weight.at_norm_sqr(2.0 * r * r);
                let lower = av * jz.powf(params.rho0) / omega;
                if av < s.min_abs {
                    s.min_abs = av;
                    s.argmin = dir.iter().map(|v| v * r).collect();
                }
                s.lower = s.lower.min(lower);
                for (n, p) in &derivs {
                    let dv = p.eval(&z, &z).expect("dimension").norm();
                    let ratio = if dv == 0.0 { 0.0 } else { dv * jz.powf(params.rho * *n as f64) / av };
                    s.upper = s.upper.max(ratio);
                }
            }
            s
        })
        .collect();

    let upper = shells.iter().map(|s| s.upper).fold(0.0, f64::max);
    let lower = shells.iter().map(|s| s.lower).fold(f64::INFINITY, f64::min);
    let best = shells.iter().min_by(|a, b| a.min_abs.total_cmp(&b.min_abs)).expect("nonempty");

    // Slope of log(min |a|/ω) against log⟨r⟩ across shells.
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(&shells)
        .filter(|(_, s)| s.lower > 0.0)
        .map(|(&r, s)| {
            let jr = (1.0 + r * r).sqrt();
            (jr.ln(), (s.lower / jr.powf(params.rho0)).ln())
        })
        .collect();
    let fitted_rho0 = (pts.len() >= 2 && pts.len() == radii.len()).then(|| {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            (-sxy / sxx).max(0.0)
        } else {
            0.0
        }
    });

    let pass = lower > params.tol && upper.is_finite();
    Ok(EllipticityReport {
        kind: if pass { EllipticityKind::Hypoelliptic { rho: params.rho, rho0: params.rho0 } } else { EllipticityKind::Fail },
        min_sphere_value: best.min_abs,
        argmin: best.argmin.clone(),
        threshold: params.tol,
        samples: radii.len() * dirs.len(),
        positive: false,
        radii,
        weight: Some(params.weight),
        rho: Some(params.rho),
        rho0: Some(params.rho0),
        upper_constant: Some(upper),
        lower_constant: Some(lower),
        fitted_rho0,
    })
}
