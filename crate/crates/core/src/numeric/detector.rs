//! Decides whether an entire function is a polynomial from samples on tori.
//!
//! Maclaurin coefficients come from the trapezoid rule on `|z_j| = R`
//! (an FFT per axis), which is spectrally accurate for analytic input.
//! Each `c_α` estimate is checked across a ladder of radii, and so is the
//! growth `M(R) = max_{|z_j|=R} |F|`. `M(R)/R^n` cannot increase for a
//! polynomial of degree `n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorOptions {
    pub degree_cap: usize,
    pub radii: Vec<f64>,
    /// Coefficients below this count as zero.
    pub tol: f64,
    /// Samples per circle; `None` picks a power of two from the largest radius.
    pub samples: Option<usize>,
}

impl DetectorOptions {
    pub fn new(degree_cap: usize) -> Self {
        Self { degree_cap, radii: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0], tol: 1e-10, samples: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEstimate {
    pub index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub radius: f64,
    /// `max |F|` on the torus.
    pub max_modulus: f64,
    /// Largest `|α|` with `|c_α| > tol` at this radius.
    pub support_degree: usize,
    /// Largest `|c_α|` with `|α| > degree_cap`.
    pub beyond_cap: f64,
    /// Cauchy bounds `M(R)/R^k`, `k = 0..=degree_cap + 1`.
    pub cauchy: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorReport {
    pub dim: usize,
    pub degree_cap: usize,
    pub samples: usize,
    pub rows: Vec<RadiusRow>,
    /// `log₂ (M(R_last) / M(R_prev))`.
    pub growth_slope: f64,
    /// Degree read off the coefficients, before the growth test.
    pub support_degree: usize,
    /// `Some(n)` when the input is judged a polynomial of degree `n ≤ degree_cap`.
    pub degree: Option<usize>,
    pub polynomial: bool,
    /// Estimates from the smallest radius, `|α| ≤ max(degree, cap)`.
    pub coefficients: Vec<CoeffEstimate>,
}

struct Sampled {
    /// `c_α` for every α with all `α_j < samples/2`, keyed by α.
    coeffs: BTreeMap<Vec<u32>, Complex64>,
    /// Largest negative-frequency amplitude, relative to `M(R)`.
    negative: f64,
    max_modulus: f64,
}

fn fft_torus<F>(f: &F, d: usize, radius: f64, m: usize, planner: &mut FftPlanner<f64>) -> Sampled
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let total = m.pow(d as u32);
    let roots: Vec<Complex64> =
        (0..m).map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64)).collect();
    let mut data = Vec::with_capacity(total);
    let mut z = vec![Complex64::new(0.0, 0.0); d];
    for flat in 0..total {
        let mut r = flat;
        for zj in z.iter_mut() {
            *zj = roots[r % m];
            r /= m;
        }
        data.push(f(&z));
    }
    let max_modulus = data.iter().fold(0.0f64, |a, v| a.max(v.norm()));

    let fft = planner.plan_fft_forward(m);
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..d {
        let stride = m.pow(axis as u32);
        for base in 0..total {
            if !(base / stride).is_multiple_of(m) {
                continue;
            }
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * stride];
            }
            fft.process(&mut line);
            for (k, v) in line.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }

    let norm = 1.0 / total as f64;
    let half = m / 2;
    let mut coeffs = BTreeMap::new();
    let mut negative = 0.0f64;
    for (flat, v) in data.iter().enumerate() {
        let mut r = flat;
        let mut idx = Vec::with_capacity(d);
        let mut neg = false;
        for _ in 0..d {
            let b = r % m;
            r /= m;
            neg |= b >= half;
            idx.push(b as u32);
        }
        let v = v * norm;
        if neg {
            negative = negative.max(v.norm());
        } else {
            let deg: u32 = idx.iter().sum();
            coeffs.insert(idx, v / radius.powi(deg as i32));
        }
    }
    Sampled { coeffs, negative: negative / max_modulus.max(f64::MIN_POSITIVE), max_modulus }
}

fn default_samples(opts: &DetectorOptions, d: usize) -> usize {
    let rmax = opts.radii.iter().copied().fold(1.0, f64::max);
    let want = (8.0 * rmax) as usize + 4 * opts.degree_cap;
    let m = want.next_power_of_two().max(128);
    // Keep multi-dimensional tori affordable.
    if d == 1 {
        m
    } else {
        m.min(match d {
            2 => 256,
            _ => 32,
        })
    }
}

/// Runs the detector. Errors with `Precondition` when the samples are not
/// those of an analytic function (negative frequencies, or circle averages
/// that disagree between radii).
pub fn polynomial_detector<F>(f: &F, dim: usize, opts: &DetectorOptions) -> Result<DetectorReport>
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    if dim == 0 {
        return Err(Error::Malformed("dimension must be positive".into()));
    }
    if opts.radii.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if opts.radii.iter().any(|r| !r.is_finite() || *r <= 0.0) || opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Malformed("radii and tolerance must be positive".into()));
    }
    let mut radii = opts.radii.clone();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let m = opts.samples.unwrap_or_else(|| default_samples(opts, dim));
    if m <= 2 * (opts.degree_cap + 1) {
        return Err(Error::Precondition(format!("{m} samples per circle cannot resolve degree {}", opts.degree_cap)));
    }

    let mut planner = FftPlanner::new();
    let sampled: Vec<Sampled> = radii.iter().map(|&r| fft_torus(f, dim, r, m, &mut planner)).collect();
    for (r, s) in radii.iter().zip(&sampled) {
        if !s.max_modulus.is_finite() {
            return Err(Error::NonConvergence(format!("non-finite samples on radius {r}")));
        }
        if s.negative > 1e-8 {
            return Err(Error::Precondition(format!(
                "negative frequencies of relative size {:e} on radius {r}: input is not analytic",
                s.negative
            )));
        }
    }
    // Low-order coefficients must not depend on the radius.
    let first = &sampled[0];
    for (r, s) in radii.iter().zip(&sampled).skip(1) {
        for (idx, c0) in first.coeffs.iter().filter(|(i, _)| i.iter().sum::<u32>() <= 2) {
            let k = idx.iter().sum::<u32>() as i32;
            let c = s.coeffs[idx];
            let scale = 1.0 + first.max_modulus / radii[0].powi(k) + s.max_modulus / r.powi(k);
            if (c - c0).norm() > 1e-8 * scale {
                return Err(Error::Precondition(format!(
                    "coefficient {idx:?} moves from {c0} to {c} between radii: input is not analytic"
                )));
            }
        }
    }

    let cap = opts.degree_cap;
    let rows: Vec<RadiusRow> = radii
        .iter()
        .zip(&sampled)
        .map(|(&radius, s)| {
            let mut support = 0usize;
            let mut beyond = 0.0f64;
            for (idx, c) in &s.coeffs {
                let k = idx.iter().sum::<u32>() as usize;
                if c.norm() > opts.tol {
                    support = support.max(k);
                }
                if k > cap {
                    beyond = beyond.max(c.norm());
                }
            }
            let cauchy = (0..=cap + 1).map(|k| s.max_modulus / radius.powi(k as i32)).collect();
            RadiusRow { radius, max_modulus: s.max_modulus, support_degree: support, beyond_cap: beyond, cauchy }
        })
        .collect();

    let support_degree = rows.iter().map(|r| r.support_degree).max().unwrap_or(0);
    let growth_slope = if rows.len() >= 2 {
        let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
        (b.max_modulus / a.max_modulus).ln() / (b.radius / a.radius).ln()
    } else {
        0.0
    };
    let growth_ok = rows.len() < 2 || growth_slope <= support_degree as f64 + 1e-6 || rows.last().unwrap().max_modulus == 0.0;
    let polynomial = support_degree <= cap && growth_ok;
    let degree = polynomial.then_some(support_degree);

    let shown = support_degree.max(cap) as u32;
    let coefficients = first
        .coeffs
        .iter()
        .filter(|(i, _)| i.iter().sum::<u32>() <= shown)
        .map(|(i, c)| CoeffEstimate { index: i.clone(), re: c.re, im: c.im })
        .collect();

    Ok(DetectorReport {
        dim,
        degree_cap: cap,
        samples: m,
        rows,
        growth_slope,
        support_degree,
        degree,
        polynomial,
        coefficients,
    })
}

impl DetectorReport {
    pub fn coefficient(&self, index: &[u32]) -> Option<Complex64> {
        self.coefficients.iter().find(|c| c.index == index).map(|c| Complex64::new(c.re, c.im))
    }
}
