//! Wick symbols of anti-Wick operators by quadrature, and envelope fits.
//!
//! With `m = (z+w)/2` and `δ = (z−w)/2`,
//! `a₀^{aw}(z, w) = e^{|δ|²} π^{−d} ∫ a₀(m + s) e^{−|s|²} e^{2i Im(δ·s̄)} ds`,
//! a centred Gaussian integral. Smooth `a₀` go through tensor Gauss–Hermite;
//! symbols with a kink at the origin (such as `e^{−|w|}`) go through a polar
//! rule centred there.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{CertGrid, EstimateReport, GridMeta};
use super::quadrature::{HermiteRule, LegendreRule};
use super::weight::WeightSpec;
use crate::error::{Error, Result};

pub fn antiwick_symbol_quadrature<A>(a0: &A, z: &[Complex64], w: &[Complex64], rule: &HermiteRule) -> Complex64
where
    A: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let d = z.len();
    let m: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a + b) * 0.5).collect();
    let delta: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a - b) * 0.5).collect();
    let d2: f64 = delta.iter().map(Complex64::norm_sqr).sum();
    let integral = rule.integrate(2 * d, |y| {
        let mut phase = 0.0;
        let mut pt = Vec::with_capacity(d);
        for j in 0..d {
            let s = Complex64::new(y[2 * j], y[2 * j + 1]);
            phase += 2.0 * (delta[j] * s.conj()).im;
            pt.push(m[j] + s);
        }
        a0(&pt) * Complex64::from_polar(1.0, phase)
    });
    integral * (d2.exp() / std::f64::consts::PI.powi(d as i32))
}

/// Half-width of the Gaussian window kept by the polar rule (`e^{−L²}` is negligible).
const WINDOW: f64 = 6.5;

/// Per-coordinate polar rule about `u = 0`: Gauss–Legendre in the radius,
/// trapezoid on the full circle or Gauss–Legendre on the visible arc.
#[derive(Clone, Debug)]
pub struct PolarRule {
    radial: LegendreRule,
    angular: LegendreRule,
    angular_count: usize,
}

impl PolarRule {
    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        Ok(Self { radial: LegendreRule::new(radial)?, angular: LegendreRule::new(angular)?, angular_count: angular })
    }

    /// Nodes `u` and weights for `∫_ℂ g(u) e^{−|u−m|²} dλ(u)`, weight included.
    fn nodes(&self, m: Complex64) -> Vec<(Complex64, f64)> {
        let r = m.norm();
        let (lo, hi) = ((r - WINDOW).max(0.0), r + WINDOW);
        let thetas: Vec<(f64, f64)> = if r <= WINDOW {
            let h = std::f64::consts::TAU / self.angular_count as f64;
            (0..self.angular_count).map(|k| (k as f64 * h, h)).collect()
        } else {
            let (phi, half) = (m.arg(), (WINDOW / r).asin());
            self.angular.on(phi - half, phi + half).collect()
        };
        let mut out = Vec::with_capacity(self.radial.len() * thetas.len());
        for (rho, wr) in self.radial.on(lo, hi) {
            for &(t, wt) in &thetas {
                let u = Complex64::from_polar(rho, t);
                let g = (-(u - m).norm_sqr()).exp();
                out.push((u, rho * wr * wt * g));
            }
        }
        out
    }
}

pub fn antiwick_symbol_polar<A>(a0: &A, z: &[Complex64], w: &[Complex64], rule: &PolarRule) -> Complex64
where
    A: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let d = z.len();
    let m: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a + b) * 0.5).collect();
    let delta: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a - b) * 0.5).collect();
    let d2: f64 = delta.iter().map(Complex64::norm_sqr).sum();
    let axes: Vec<Vec<(Complex64, f64)>> = m.iter().map(|&mj| rule.nodes(mj)).collect();
    let mut idx = vec![0usize; d];
    let mut u = vec![Complex64::new(0.0, 0.0); d];
    let mut acc = Complex64::new(0.0, 0.0);
    'outer: loop {
        let mut wgt = 1.0;
        let mut phase = 0.0;
        for j in 0..d {
            let (uj, wj) = axes[j][idx[j]];
            u[j] = uj;
            wgt *= wj;
            phase += 2.0 * (delta[j] * (uj - m[j]).conj()).im;
        }
        acc += a0(&u) * Complex64::from_polar(wgt, phase);
        for j in 0..d {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    acc * (d2.exp() / std::f64::consts::PI.powi(d as i32))
}

/// Quadrature used for `a₀^{aw}`; the check compares a rule against its doubling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AwQuadrature {
    GaussHermite { nodes: usize },
    Polar { radial: usize, angular: usize },
}

impl AwQuadrature {
    pub fn doubled(&self) -> Self {
        match *self {
            Self::GaussHermite { nodes } => Self::GaussHermite { nodes: 2 * nodes },
            Self::Polar { radial, angular } => Self::Polar { radial: 2 * radial, angular: 2 * angular },
        }
    }
}

enum Prepared {
    Hermite(HermiteRule),
    Polar(PolarRule),
}

impl Prepared {
    fn new(q: &AwQuadrature) -> Result<Self> {
        Ok(match *q {
            AwQuadrature::GaussHermite { nodes } => Self::Hermite(HermiteRule::new(nodes)?),
            AwQuadrature::Polar { radial, angular } => Self::Polar(PolarRule::new(radial, angular)?),
        })
    }

    fn eval<A>(&self, a0: &A, z: &[Complex64], w: &[Complex64]) -> Complex64
    where
        A: Fn(&[Complex64]) -> Complex64 + ?Sized,
    {
        match self {
            Self::Hermite(r) => antiwick_symbol_quadrature(a0, z, w, r),
            Self::Polar(r) => antiwick_symbol_polar(a0, z, w, r),
        }
    }
}

/// Envelope for `a₀^{aw}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "envelope", rename_all = "snake_case")]
pub enum AwEnvelope {
    /// `C e^{¼|z−w|²} ω(z + w)`.
    Weighted { weight: WeightSpec },
    /// `C e^{¼|z−w|² − r|z+w|^{1/s}}` with `r` fitted.
    Decay { s: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AwBoundOptions {
    pub grid: CertGrid,
    pub quadrature: AwQuadrature,
    pub envelope: AwEnvelope,
    pub stability_ratio: f64,
    /// Relative change allowed when the node count doubles; `None` skips the check.
    pub quadrature_tol: Option<f64>,
}

struct Sample {
    /// `|z + w|`
    sum_norm: f64,
    /// `log|a^{aw}| − ¼|z−w|²`
    reduced: f64,
}

fn sample_grid(grid: &CertGrid, d: usize) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let axis = grid.axis();
    let n = axis.len();
    let k = 4 * d;
    (0..n.pow(k as u32))
        .map(|mut flat| {
            let mut c = vec![0.0; k];
            for v in c.iter_mut() {
                *v = axis[flat % n];
                flat /= n;
            }
            let z = (0..d).map(|j| Complex64::new(c[2 * j], c[2 * j + 1])).collect();
            let w = (0..d).map(|j| Complex64::new(c[2 * d + 2 * j], c[2 * d + 2 * j + 1])).collect();
            (z, w)
        })
        .collect()
}

/// Upper-envelope line fit `reduced ≤ c − r·x^{1/s}`: the maximum of each
/// bin in `x`, then least squares through those maxima.
fn fit_decay(samples: &[Sample], s: f64) -> (f64, f64) {
    let xs: Vec<f64> = samples.iter().map(|p| p.sum_norm.powf(1.0 / s)).collect();
    let xmax = xs.iter().copied().fold(0.0, f64::max);
    let bins = 24usize;
    let mut best = vec![f64::NEG_INFINITY; bins];
    for (x, p) in xs.iter().zip(samples) {
        let b = ((x / xmax.max(f64::MIN_POSITIVE)) * (bins as f64 - 1.0)).round() as usize;
        best[b] = best[b].max(p.reduced);
    }
    let pts: Vec<(f64, f64)> = best
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .map(|(b, &y)| (xmax * b as f64 / (bins as f64 - 1.0), y))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let r = if sxx > 0.0 { -sxy / sxx } else { 0.0 };
    // Verification pass: smallest log C that makes the envelope hold everywhere.
    let ln_c = xs.iter().zip(samples).map(|(x, p)| p.reduced + r * x).fold(f64::NEG_INFINITY, f64::max);
    (ln_c, r)
}

fn fit_level<A>(a0: &A, d: usize, opts: &AwBoundOptions, q: &AwQuadrature) -> Result<(f64, f64, Vec<Complex64>)>
where
    A: Fn(&[Complex64]) -> Complex64 + Sync + ?Sized,
{
    let rule = Prepared::new(q)?;
    let pts = sample_grid(&opts.grid, d);
    let values: Vec<Complex64> = pts.par_iter().map(|(z, w)| rule.eval(a0, z, w)).collect();
    let samples: Vec<Sample> = pts
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|((z, w), v)| {
            let dz: f64 = z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum();
            let sum_norm = z.iter().zip(w).map(|(a, b)| (a + b).norm_sqr()).sum::<f64>().sqrt();
            let extra = match &opts.envelope {
                AwEnvelope::Weighted { weight } => -weight.ln_at_norm_sqr(sum_norm * sum_norm),
                AwEnvelope::Decay { .. } => 0.0,
            };
            Sample { sum_norm, reduced: v.norm().ln() - 0.25 * dz + extra }
        })
        .collect();
    if samples.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (ln_c, r) = match &opts.envelope {
        AwEnvelope::Weighted { .. } => (samples.iter().map(|p| p.reduced).fold(f64::NEG_INFINITY, f64::max), 0.0),
        AwEnvelope::Decay { s } => fit_decay(&samples, *s),
    };
    Ok((ln_c, r, values))
}

/// Computes `a₀^{aw}` with the chosen rule and its doubling, fits the
/// envelope at both, and passes when the fit is stable.
pub fn antiwick_bound_check<A>(a0: &A, dim: usize, opts: &AwBoundOptions) -> Result<EstimateReport>
where
    A: Fn(&[Complex64]) -> Complex64 + Sync + ?Sized,
{
    if let AwEnvelope::Decay { s } = opts.envelope {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::Malformed(format!("decay exponent needs s > 0, got {s}")));
        }
    }
    let (c0, r0, v0) = fit_level(a0, dim, opts, &opts.quadrature)?;
    let (c1, r1, v1) = fit_level(a0, dim, opts, &opts.quadrature.doubled())?;
    let quad_change = v0
        .iter()
        .zip(&v1)
        .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max);
    if let Some(tol) = opts.quadrature_tol {
        if quad_change > tol {
            return Err(Error::NonConvergence(format!(
                "doubling quadrature nodes moved values by {quad_change:e} (> {tol:e})"
            )));
        }
    }
    let (k0, k1) = (c0.exp(), c1.exp());
    let ratio_ok = |a: f64, b: f64| a == b || (a > 0.0 && b > 0.0 && (a / b).max(b / a) < opts.stability_ratio);
    let mut pass = k0.is_finite() && k1.is_finite() && ratio_ok(k0, k1);
    let mut constants = BTreeMap::new();
    constants.insert("C".to_string(), k1);
    constants.insert("quadrature_change".to_string(), quad_change);
    if let AwEnvelope::Decay { .. } = opts.envelope {
        pass &= r1 > 0.0 && ratio_ok(r0, r1);
        constants.insert("r".to_string(), r1);
    }
    let form = match opts.envelope {
        AwEnvelope::Weighted { .. } => "antiwick_weighted",
        AwEnvelope::Decay { .. } => "antiwick_decay",
    };
    let points = opts.grid.count.pow(4 * dim as u32);
    Ok(EstimateReport {
        form: form.to_string(),
        constants,
        max_violation: 0.0,
        grids: vec![
            GridMeta { radius: opts.grid.radius, count: opts.grid.count, points },
            GridMeta { radius: opts.grid.radius, count: opts.grid.count, points },
        ],
        refinement: vec![k0, k1],
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{AwSymbol, ExactCoeff, Monomial};
    use crate::symmaps::antiwick_to_wick;

    #[test]
    fn polynomial_symbols_are_reproduced() {
        let rule = HermiteRule::new(64).unwrap();
        let mut p = AwSymbol::monomial(1, [2], [1], ExactCoeff::from_int(3));
        p.add_term(Monomial::new([1], [1]), &ExactCoeff::one());
        p.add_term(Monomial::new([0], [4]), &ExactCoeff::i());
        let exact = antiwick_to_wick(&p);
        let f = |u: &[Complex64]| p.eval(u).unwrap();
        for (z, w) in [(0.3, -0.7), (1.2, 0.4), (-1.5, 1.5)] {
            let z = [Complex64::new(z, 0.5)];
            let w = [Complex64::new(w, -0.3)];
            let got = antiwick_symbol_quadrature(&f, &z, &w, &rule);
            let want = exact.eval(&z, &w).unwrap();
            assert!((got - want).norm() <= 1e-8 * want.norm().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn constant_symbol_is_one() {
        let opts = AwBoundOptions {
            grid: CertGrid { radius: 2.0, count: 5 },
            quadrature: AwQuadrature::GaussHermite { nodes: 48 },
            envelope: AwEnvelope::Weighted { weight: WeightSpec::one() },
            stability_ratio: 1.1,
            quadrature_tol: Some(1e-8),
        };
        let r = antiwick_bound_check(&|_: &[Complex64]| Complex64::new(1.0, 0.0), 1, &opts).unwrap();
        assert!(r.pass);
        assert!((r.constants["C"] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn modulus_squared_matches_exact_and_weighted_envelope() {
        let opts = AwBoundOptions {
            grid: CertGrid { radius: 3.0, count: 5 },
            quadrature: AwQuadrature::GaussHermite { nodes: 32 },
            envelope: AwEnvelope::Weighted { weight: WeightSpec::Polynomial { s: 2.0 } },
            stability_ratio: 1.1,
            quadrature_tol: Some(1e-8),
        };
        let f = |u: &[Complex64]| Complex64::new(u[0].norm_sqr(), 0.0);
        let r = antiwick_bound_check(&f, 1, &opts).unwrap();
        assert!(r.pass, "{r:?}");
        let rule = HermiteRule::new(32).unwrap();
        let (z, w) = (Complex64::new(1.5, -0.5), Complex64::new(-0.2, 1.1));
        let got = antiwick_symbol_quadrature(&f, &[z], &[w], &rule);
        assert!((got - (z * w.conj() + 1.0)).norm() < 1e-8);
    }

    #[test]
    fn kinked_decay_gets_positive_rate() {
        let f = |u: &[Complex64]| Complex64::new((-u[0].norm()).exp(), 0.0);
        let opts = AwBoundOptions {
            grid: CertGrid { radius: 4.0, count: 5 },
            quadrature: AwQuadrature::Polar { radial: 64, angular: 128 },
            envelope: AwEnvelope::Decay { s: 1.0 },
            stability_ratio: 1.1,
            quadrature_tol: Some(1e-8),
        };
        let r = antiwick_bound_check(&f, 1, &opts).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.constants["r"] > 0.3 && r.constants["r"] < 0.5);
    }

    #[test]
    fn polar_agrees_with_hermite_on_smooth_input() {
        let f = |u: &[Complex64]| u[0] * u[0].conj() * u[0] + 2.0;
        let (z, w) = ([Complex64::new(0.7, 1.0)], [Complex64::new(-1.0, 0.4)]);
        let a = antiwick_symbol_quadrature(&f, &z, &w, &HermiteRule::new(32).unwrap());
        let b = antiwick_symbol_polar(&f, &z, &w, &PolarRule::new(64, 128).unwrap());
        assert!((a - b).norm() < 1e-9 * a.norm());
    }
}
