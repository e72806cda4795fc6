use std::num::NonZeroUsize;

use gauss_quad::{GaussHermite, GaussLegendre};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Clone, Debug)]
pub struct LegendreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LegendreRule {
    pub fn new(n: usize) -> Result<Self> {
        let n = NonZeroUsize::new(n).ok_or(Error::EmptyGrid)?;
        let gl = GaussLegendre::new(n);
        Ok(Self { nodes: gl.nodes().copied().collect(), weights: gl.weights().copied().collect() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }
}

/// Gauss–Hermite rule for `∫ g(x) e^{−x²} dx`.
#[derive(Clone, Debug)]
pub struct HermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HermiteRule {
    pub fn new(n: usize) -> Result<Self> {
        let n = NonZeroUsize::new(n).ok_or(Error::EmptyGrid)?;
        let gh = GaussHermite::new(n);
        Ok(Self { nodes: gh.nodes().copied().collect(), weights: gh.weights().copied().collect() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_{ℝ^k} g(y) e^{−|y|²} dy` on the tensor grid.
    pub fn integrate<F>(&self, k: usize, g: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let n = self.len();
        let mut idx = vec![0usize; k];
        let mut y = vec![0.0; k];
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            for (j, &i) in idx.iter().enumerate() {
                y[j] = self.nodes[i];
                w *= self.weights[i];
            }
            acc += g(&y) * w;
            let mut j = 0;
            loop {
                if j == k {
                    return acc;
                }
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
}

/// Uniform trapezoid grid on `[−L, L]` per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for UniformGrid {
    fn default() -> Self {
        Self { half_width: 12.0, points: 384 }
    }
}

impl UniformGrid {
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Largest frequency resolved by the grid.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.step()
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + self.step() * i as f64
    }

    /// `∫_{ℝ^k} g(y) dy`; `g` is assumed negligible at the boundary.
    pub fn integrate<F>(&self, k: usize, g: F) -> Result<Complex64>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        if self.points < 2 {
            return Err(Error::EmptyGrid);
        }
        let h = self.step();
        let n = self.points;
        let mut idx = vec![0usize; k];
        let mut y = vec![0.0; k];
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            for (j, &i) in idx.iter().enumerate() {
                y[j] = self.node(i);
                w *= if i == 0 || i == n - 1 { 0.5 * h } else { h };
            }
            acc += g(&y) * w;
            let mut j = 0;
            loop {
                if j == k {
                    return Ok(acc);
                }
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
}
