//! Closed-form Gaussian integrals of polynomials.
//!
//! Two integrals show up everywhere: centred moments
//! `(s/π)^d ∫ w^β w̄^γ e^{−s|w|²} dλ` and the off-diagonal reproducing
//! integral `π^{−d} ∫ p(w, w̄) e^{−(w−u, w−v)} dλ(w)`.
//!
//! For the second one, put `v = u` first: after `w = u + t` the integral is
//! `Σ_κ κ! C(β,κ) C(γ,κ) u^{β−κ} ū^{γ−κ}` (only matched powers of `t, t̄`
//! survive). Both sides are holomorphic in `u` and in `v̄` once `ū` is
//! replaced by `v̄`, so the identity extends off the diagonal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::ExactCoeff;
use super::multi_index::MultiIndex;
use super::poly::{AwSymbol, Monomial, WickSymbol};
use crate::error::{Error, Result};

/// `(s/π)^d ∫ w^β w̄^γ e^{−s|w|²} dλ(w) = δ_{βγ} β!/s^{|β|}`.
pub fn gaussian_moment(beta: &MultiIndex, gamma: &MultiIndex, s: &BigRational) -> Result<ExactCoeff> {
    if !s.is_positive() {
        return Err(Error::Precondition(format!("Gaussian width must be positive, got {s}")));
    }
    if beta.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch { expected: beta.dim(), found: gamma.dim() });
    }
    if beta != gamma {
        return Ok(ExactCoeff::zero());
    }
    let mut denom = BigRational::one();
    for _ in 0..beta.total() {
        denom *= s;
    }
    Ok(ExactCoeff::from_rational(BigRational::from(beta.factorial()) / denom))
}

/// A polynomial in an integration variable `(w, w̄)` whose coefficients are
/// Wick polynomials in outer variables `(z, w̄_outer)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussIntegrand {
    dim: usize,
    terms: BTreeMap<Monomial, WickSymbol>,
}

impl GaussIntegrand {
    pub fn new(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `coeff(z, w̄) · w^β w̄^γ`.
    pub fn add_term(&mut self, beta: MultiIndex, gamma: MultiIndex, coeff: &WickSymbol) -> Result<()> {
        for d in [beta.dim(), gamma.dim(), coeff.dim()] {
            if d != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: d });
            }
        }
        let key = Monomial { first: beta, second: gamma };
        let entry = self.terms.entry(key).or_insert_with(|| WickSymbol::zero(self.dim));
        *entry = &*entry + coeff;
        Ok(())
    }

    pub fn from_aw(p: &AwSymbol) -> Self {
        let mut out = Self::new(p.dim());
        for (m, c) in p.terms() {
            out.terms.insert(m.clone(), WickSymbol::constant(p.dim(), c.clone()));
        }
        out
    }

    /// `π^{−d} ∫ (·) e^{−(w−u, w−v)} dλ(w)`, returned as a Wick polynomial in
    /// `(u, v̄)` multiplied into the outer coefficients.
    ///
    /// With trivial coefficients, the first block of the result is `u` and the
    /// second is `v̄`. With nontrivial ones, the caller identifies the outer
    /// variables with `u` and `v`.
    pub fn reduce(&self) -> WickSymbol {
        let d = self.dim;
        let mut out = WickSymbol::zero(d);
        for (m, outer) in &self.terms {
            if outer.is_zero() {
                continue;
            }
            let inner = reduce_monomial(&m.first, &m.second);
            out = &out + &(outer * &inner);
        }
        out
    }
}

fn reduce_monomial(beta: &MultiIndex, gamma: &MultiIndex) -> WickSymbol {
    let d = beta.dim();
    let mut out = WickSymbol::zero(d);
    for kappa in beta.min(gamma).sub_indices() {
        let c: BigInt = kappa.factorial() * beta.binomial(&kappa) * gamma.binomial(&kappa);
        if c.is_zero() {
            continue;
        }
        let b = beta.checked_sub(&kappa).expect("κ ≤ β");
        let g = gamma.checked_sub(&kappa).expect("κ ≤ γ");
        out.add_term(Monomial { first: b, second: g }, &ExactCoeff::from_bigint(c));
    }
    out
}

/// `q(u, v̄) = π^{−d} ∫ p(w, w̄) e^{−(w−u, w−v)} dλ(w)` for a polynomial `p`.
pub fn gaussian_reduce(p: &AwSymbol) -> WickSymbol {
    GaussIntegrand::from_aw(p).reduce()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::coeff::rat;
    use gauss_quad::GaussHermite;
    use num_complex::Complex64;
    use std::num::NonZeroUsize;

    fn aw(b: u32, g: u32) -> AwSymbol {
        AwSymbol::monomial(1, [b], [g], ExactCoeff::one())
    }

    /// Brute-force `π^{−1} ∫ p(w) e^{−(w−u)(w̄−v̄)} dλ` on a tensor Gauss–Hermite grid.
    fn quad_reduce(p: &AwSymbol, u: Complex64, v: Complex64) -> Complex64 {
        let gh = GaussHermite::new(NonZeroUsize::new(60).unwrap());
        let nodes: Vec<(f64, f64)> = gh.nodes().zip(gh.weights()).map(|(&x, &w)| (x, w)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, wx) in &nodes {
            for &(y, wy) in &nodes {
                let w = Complex64::new(x, y);
                let extra = (w * v.conj() + u * w.conj() - u * v.conj()).exp();
                acc += p.eval(&[w]).unwrap() * extra * wx * wy;
            }
        }
        acc / std::f64::consts::PI
    }

    #[test]
    fn moment_examples() {
        let one = MultiIndex::from([1]);
        assert_eq!(gaussian_moment(&one, &one, &rat(2, 1)).unwrap(), ExactCoeff::from_ratio(1, 2));
        let zero = MultiIndex::from([0]);
        assert_eq!(gaussian_moment(&zero, &zero, &rat(7, 3)).unwrap(), ExactCoeff::one());
        assert!(gaussian_moment(&[2].into(), &[1].into(), &rat(1, 1)).unwrap().is_zero());
        assert!(gaussian_moment(&one, &one, &rat(0, 1)).is_err());
    }

    #[test]
    fn moment_matches_signed_integral() {
        // ∫ |w|² e^{−2|w|²} dλ with the (−1)^{|α|} sign: −π/4.
        let m = gaussian_moment(&[1].into(), &[1].into(), &rat(2, 1)).unwrap().to_complex().re;
        let pi = std::f64::consts::PI;
        assert!((-m * pi / 2.0 - (-pi / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn moments_agree_with_quadrature() {
        let gh = GaussHermite::new(NonZeroUsize::new(40).unwrap());
        let nodes: Vec<(f64, f64)> = gh.nodes().zip(gh.weights()).map(|(&x, &w)| (x, w)).collect();
        for (sn, sd) in [(1, 1), (2, 1), (1, 3)] {
            let s = sn as f64 / sd as f64;
            for b in 0..=4u32 {
                for g in 0..=4u32 {
                    let exact = gaussian_moment(&[b].into(), &[g].into(), &rat(sn, sd)).unwrap().to_complex();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(x, wx) in &nodes {
                        for &(y, wy) in &nodes {
                            let t = Complex64::new(x, y) / s.sqrt();
                            acc += t.powu(b) * t.conj().powu(g) * wx * wy;
                        }
                    }
                    acc /= std::f64::consts::PI;
                    let scale = exact.norm().max(1.0);
                    assert!((acc - exact).norm() / scale < 1e-8, "β={b} γ={g} s={s}");
                }
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(gaussian_reduce(&AwSymbol::one(1)), WickSymbol::one(1));
        assert_eq!(gaussian_reduce(&aw(0, 1)), WickSymbol::zw(1, [0], [1], ExactCoeff::one()));
        let want = &WickSymbol::zw(1, [1], [1], ExactCoeff::one()) + &WickSymbol::one(1);
        assert_eq!(gaussian_reduce(&aw(1, 1)), want);
    }

    #[test]
    fn reduce_agrees_with_quadrature_off_diagonal() {
        let pts = [
            (Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.4)),
            (Complex64::new(0.0, 0.5), Complex64::new(0.6, 0.0)),
        ];
        for b in 0..=3u32 {
            for g in 0..=3u32 {
                let p = aw(b, g);
                let q = gaussian_reduce(&p);
                for &(u, v) in &pts {
                    let exact = q.eval(&[u], &[v]).unwrap();
                    let num = quad_reduce(&p, u, v);
                    assert!((exact - num).norm() < 1e-8 * exact.norm().max(1.0), "β={b} γ={g}: {exact} vs {num}");
                }
            }
        }
    }

    #[test]
    fn reduce_factorizes_over_coordinates() {
        let p1 = AwSymbol::monomial(2, [2, 0], [1, 0], ExactCoeff::one());
        let p2 = AwSymbol::monomial(2, [0, 1], [0, 3], ExactCoeff::from_int(3));
        let joint = gaussian_reduce(&(&p1 * &p2));
        let split = &gaussian_reduce(&p1) * &gaussian_reduce(&p2);
        assert_eq!(joint, split);
    }

    #[test]
    fn outer_coefficients_multiply_through() {
        let d = 1;
        let mut ig = GaussIntegrand::new(d);
        let z = WickSymbol::first_var(d, 0);
        ig.add_term([1].into(), [1].into(), &z).unwrap();
        // z · (u v̄ + 1) with the outer z sharing the first block.
        let want = &(&z * &WickSymbol::zw(1, [1], [1], ExactCoeff::one())) + &z;
        assert_eq!(ig.reduce(), want);
    }
}
