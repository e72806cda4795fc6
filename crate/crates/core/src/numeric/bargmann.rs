//! Bargmann transform, the transform `𝒯_φ`, and the link between them.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::hermite::hermite_eval;
use super::quadrature::{HermiteRule, UniformGrid};
use crate::error::{Error, Result};
use crate::symalg::{MultiIndex, WeylSymbol};

const PI: f64 = std::f64::consts::PI;

/// `e_α(z) = z^α / √α!`.
pub fn fock_monomial(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let f = alpha.factorial().to_f64().unwrap_or(f64::INFINITY);
    let mut v = Complex64::new(1.0 / f.sqrt(), 0.0);
    for (&a, &zj) in alpha.entries().iter().zip(z) {
        v *= zj.powu(a);
    }
    v
}

/// Coefficient path: `Σ c_α e_α(z)` for `f = Σ c_α h_α`.
pub fn bargmann_coefficients(coeffs: &[(MultiIndex, Complex64)], z: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (alpha, c) in coeffs {
        if alpha.dim() != z.len() {
            return Err(Error::DimensionMismatch { expected: z.len(), found: alpha.dim() });
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Malformed("non-finite Hermite coefficient".into()));
        }
        acc += c * fock_monomial(alpha, z);
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(Error::NonConvergence("Hermite series diverged".into()));
    }
    Ok(acc)
}

/// `𝔄(z, y) = π^{−d/4} exp(−½(⟨z,z⟩ + |y|²) + √2⟨z,y⟩)` with the bilinear `⟨z,z⟩`.
pub fn bargmann_kernel(z: &[Complex64], y: &[f64]) -> Complex64 {
    let d = z.len() as f64;
    let zz: Complex64 = z.iter().map(|v| v * v).sum();
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let zy: Complex64 = z.iter().zip(y).map(|(a, &b)| a * b).sum();
    PI.powf(-d / 4.0) * (-0.5 * (zz + yy) + std::f64::consts::SQRT_2 * zy).exp()
}

/// Kernel path: `∫ 𝔄(z, y) f(y) dy` by Gauss–Hermite quadrature.
pub fn bargmann_quadrature<F>(f: F, z: &[Complex64], rule: &HermiteRule) -> Complex64
where
    F: Fn(&[f64]) -> Complex64,
{
    let d = z.len();
    rule.integrate(d, |y| {
        let yy: f64 = y.iter().map(|v| v * v).sum();
        // Combine the weight e^{|y|²} with the kernel exponent before exponentiating.
        let zz: Complex64 = z.iter().map(|v| v * v).sum();
        let zy: Complex64 = z.iter().zip(y).map(|(a, &b)| a * b).sum();
        let e = -0.5 * (zz + yy) + std::f64::consts::SQRT_2 * zy + yy;
        PI.powf(-(d as f64) / 4.0) * e.exp() * f(y)
    })
}

/// `f = Σ c_α h_α` as a function on `ℝ^d`.
pub fn hermite_series(coeffs: &[(MultiIndex, Complex64)]) -> impl Fn(&[f64]) -> Complex64 + '_ {
    move |x: &[f64]| coeffs.iter().map(|(a, c)| c * hermite_eval(a, x)).sum()
}

/// `φ(x) = π^{−d/4} e^{−|x|²/2}`.
pub fn gaussian_window(x: &[f64]) -> Complex64 {
    let d = x.len() as f64;
    let xx: f64 = x.iter().map(|v| v * v).sum();
    Complex64::new(PI.powf(-d / 4.0) * (-0.5 * xx).exp(), 0.0)
}

/// `𝒯_φ f(x, ξ) = (2π)^{−d/2} ∫ f(y + x) conj(φ(y)) e^{−i⟨y,ξ⟩} dy` on a uniform grid.
pub fn stft_t<F, W>(f: F, window: W, x: &[f64], xi: &[f64], grid: &UniformGrid) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
    W: Fn(&[f64]) -> Complex64,
{
    let d = x.len();
    if xi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: xi.len() });
    }
    let fmax = xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if fmax >= grid.nyquist() {
        return Err(Error::Precondition(format!(
            "frequency {fmax} exceeds the grid's Nyquist limit {}",
            grid.nyquist()
        )));
    }
    let v = grid.integrate(d, |y| {
        let shifted: Vec<f64> = y.iter().zip(x).map(|(a, b)| a + b).collect();
        let phase: f64 = y.iter().zip(xi).map(|(a, b)| a * b).sum();
        f(&shifted) * window(y).conj() * Complex64::from_polar(1.0, -phase)
    })?;
    Ok(v * (2.0 * PI).powf(-(d as f64) / 2.0))
}

/// `V_φ f(x, ξ) = e^{−i⟨x,ξ⟩} 𝒯_φ f(x, ξ)`.
pub fn stft_v<F, W>(f: F, window: W, x: &[f64], xi: &[f64], grid: &UniformGrid) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
    W: Fn(&[f64]) -> Complex64,
{
    let t = stft_t(f, window, x, xi, grid)?;
    let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    Ok(Complex64::from_polar(1.0, -phase) * t)
}

/// `(U_V F)(x + iξ) = (2π)^{d/2} e^{½(|x|²+|ξ|²)} e^{i⟨x,ξ⟩} F(√2 x, −√2 ξ)`,
/// given the value `F(√2 x, −√2 ξ)`.
pub fn u_v_factor(z: &[Complex64], value: Complex64) -> Complex64 {
    let d = z.len() as f64;
    let r2: f64 = z.iter().map(Complex64::norm_sqr).sum();
    let phase: f64 = z.iter().map(|v| v.re * v.im).sum();
    (2.0 * PI).powf(d / 2.0) * (0.5 * r2).exp() * Complex64::from_polar(1.0, phase) * value
}

/// `𝔙 f(z)` computed as `U_V 𝒯_φ f`.
pub fn bargmann_via_stft<F>(f: F, z: &[Complex64], grid: &UniformGrid) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let s2 = std::f64::consts::SQRT_2;
    let x: Vec<f64> = z.iter().map(|v| s2 * v.re).collect();
    let xi: Vec<f64> = z.iter().map(|v| -s2 * v.im).collect();
    let t = stft_t(f, gaussian_window, &x, &xi, grid)?;
    Ok(u_v_factor(z, t))
}

/// Right side of the Bargmann-assignment/STFT relation:
/// `(2π)^{d/2} e^{½|z−w|²} 𝒯_ψ 𝔞(X, Ξ)` with `ψ = (2/π)^{d/2} e^{−|Y|²}` on `ℝ^{2d}`,
/// `X = ((x+y)/√2, −(ξ+η)/√2)` and `Ξ = (√2(η−ξ), √2(y−x))`.
pub fn assignment_via_stft(a: &WeylSymbol, z: &[Complex64], w: &[Complex64], grid: &UniformGrid) -> Result<Complex64> {
    let d = a.dim();
    if z.len() != d || w.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: z.len().min(w.len()) });
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut big_x = vec![0.0; 2 * d];
    let mut big_xi = vec![0.0; 2 * d];
    for j in 0..d {
        let (x, xi, y, eta) = (z[j].re, z[j].im, w[j].re, w[j].im);
        big_x[j] = (x + y) / s2;
        big_x[d + j] = -(xi + eta) / s2;
        big_xi[j] = s2 * (eta - xi);
        big_xi[d + j] = s2 * (y - x);
    }
    let symbol = |v: &[f64]| a.eval_real(&v[..d], &v[d..]).expect("dimension");
    let psi = |v: &[f64]| {
        let r2: f64 = v.iter().map(|t| t * t).sum();
        Complex64::new((2.0 / PI).powf(d as f64 / 2.0) * (-r2).exp(), 0.0)
    };
    let t = stft_t(symbol, psi, &big_x, &big_xi, grid)?;
    let dz: f64 = z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok((2.0 * PI).powf(d as f64 / 2.0) * (0.5 * dz).exp() * t)
}

/// `∬ |𝒯_φ f(x, ξ)|² dx dξ` over a phase-space grid in `ℝ^{2d}` (Moyal: equals `‖f‖²‖φ‖²`).
pub fn moyal_energy<F, W>(d: usize, f: F, window: W, inner: &UniformGrid, outer: &UniformGrid) -> Result<f64>
where
    F: Fn(&[f64]) -> Complex64,
    W: Fn(&[f64]) -> Complex64,
{
    let v = outer.integrate(2 * d, |p| {
        let t = stft_t(&f, &window, &p[..d], &p[d..], inner).unwrap_or(Complex64::new(f64::NAN, 0.0));
        Complex64::new(t.norm_sqr(), 0.0)
    })?;
    if !v.re.is_finite() {
        return Err(Error::Precondition("phase-space grid exceeds the inner Nyquist limit".into()));
    }
    Ok(v.re)
}
