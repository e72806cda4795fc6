//! Hermite functions `h_n`, orthonormal in `L²(ℝ)`.

use crate::symalg::MultiIndex;

/// `h_0, …, h_n` at `x` via
/// `h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}`.
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if n >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * h0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

pub fn hermite_1d(n: usize, x: f64) -> f64 {
    hermite_all(n, x)[n]
}

/// `h_α(x) = Π h_{α_j}(x_j)`.
pub fn hermite_eval(alpha: &MultiIndex, x: &[f64]) -> f64 {
    alpha.entries().iter().zip(x).map(|(&a, &xj)| hermite_1d(a as usize, xj)).product()
}
