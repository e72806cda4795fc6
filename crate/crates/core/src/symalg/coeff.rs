//! The coefficient field ℚ(i)[√2].
//!
//! An element is stored as `p + q·√2` with `p, q` Gaussian rationals. The
//! field is closed under every transform in this crate: the Bargmann
//! assignment introduces factors `2^{±1/2}` and `i`, nothing else.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }

    fn add_ref(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re * &o.re);
        }
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// An element `p + q·√2` of ℚ(i)[√2].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactCoeff {
    p: GaussRational,
    q: GaussRational,
}

impl ExactCoeff {
    pub fn new(p: GaussRational, q: GaussRational) -> Self {
        Self { p, q }
    }

    pub fn zero() -> Self {
        Self { p: GaussRational::zero(), q: GaussRational::zero() }
    }

    pub fn one() -> Self {
        Self { p: GaussRational::one(), q: GaussRational::zero() }
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRational::new(BigRational::zero(), BigRational::one()))
    }

    pub fn sqrt2() -> Self {
        Self { p: GaussRational::zero(), q: GaussRational::one() }
    }

    /// `2^{-1/2} = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Self { p: GaussRational::zero(), q: GaussRational::real(rat(1, 2)) }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_gauss(GaussRational::real(r))
    }

    pub fn from_gauss(p: GaussRational) -> Self {
        Self { p, q: GaussRational::zero() }
    }

    /// `re + i·im` with small integer parts; handy in tests and generators.
    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Self::from_gauss(GaussRational::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        ))
    }

    pub fn rational_part(&self) -> &GaussRational {
        &self.p
    }

    pub fn sqrt2_part(&self) -> &GaussRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.p.im.is_zero() && self.p.re.is_one()
    }

    /// True when the imaginary parts of both components vanish.
    pub fn is_real(&self) -> bool {
        self.p.im.is_zero() && self.q.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { p: self.p.conj(), q: self.q.conj() }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self { p: self.p.scale(r), q: self.q.scale(r) }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale_rational(&BigRational::from_integer(n.clone()))
    }

    /// Multiplicative inverse: `(p + q√2)⁻¹ = (p − q√2)/(p² − 2q²)`.
    ///
    /// `p² − 2q²` vanishes only at zero since √2 ∉ ℚ(i).
    pub fn inv(&self) -> Result<Self> {
        let two = GaussRational::real(rat(2, 1));
        let norm = self.p.mul_ref(&self.p).sub_ref(&two.mul_ref(&self.q.mul_ref(&self.q)));
        let n_inv = norm
            .inv()
            .ok_or_else(|| Error::Malformed("division by zero in ℚ(i)[√2]".into()))?;
        Ok(Self { p: self.p.mul_ref(&n_inv), q: self.q.mul_ref(&n_inv).scale(&rat(-1, 1)) })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        self.p.to_complex() + self.q.to_complex() * std::f64::consts::SQRT_2
    }

    /// Modulus bound used for relative tolerances (sum of component magnitudes).
    pub fn magnitude_bound(&self) -> f64 {
        self.to_complex().norm()
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators/denominators: scale through the bit lengths.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900) as i32;
    let ns = (n.abs() >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
    let ds = (d >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
    let v = ns / ds;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

impl<'a> Add<&'a ExactCoeff> for &'a ExactCoeff {
    type Output = ExactCoeff;
    fn add(self, o: &ExactCoeff) -> ExactCoeff {
        ExactCoeff { p: self.p.add_ref(&o.p), q: self.q.add_ref(&o.q) }
    }
}

impl<'a> Sub<&'a ExactCoeff> for &'a ExactCoeff {
    type Output = ExactCoeff;
    fn sub(self, o: &ExactCoeff) -> ExactCoeff {
        ExactCoeff { p: self.p.sub_ref(&o.p), q: self.q.sub_ref(&o.q) }
    }
}

impl<'a> Mul<&'a ExactCoeff> for &'a ExactCoeff {
    type Output = ExactCoeff;
    fn mul(self, o: &ExactCoeff) -> ExactCoeff {
        if self.q.is_zero() && o.q.is_zero() {
            return ExactCoeff::from_gauss(self.p.mul_ref(&o.p));
        }
        let two = rat(2, 1);
        ExactCoeff {
            p: self.p.mul_ref(&o.p).add_ref(&self.q.mul_ref(&o.q).scale(&two)),
            q: self.p.mul_ref(&o.q).add_ref(&self.q.mul_ref(&o.p)),
        }
    }
}

impl Neg for &ExactCoeff {
    type Output = ExactCoeff;
    fn neg(self) -> ExactCoeff {
        let m1 = rat(-1, 1);
        self.scale_rational(&m1)
    }
}

impl Neg for ExactCoeff {
    type Output = ExactCoeff;
    fn neg(self) -> ExactCoeff {
        -&self
    }
}

macro_rules! owned_binops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ExactCoeff> for ExactCoeff {
            type Output = ExactCoeff;
            fn $m(self, o: ExactCoeff) -> ExactCoeff { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a ExactCoeff> for ExactCoeff {
            type Output = ExactCoeff;
            fn $m(self, o: &ExactCoeff) -> ExactCoeff { (&self).$m(o) }
        }
        impl<'a> $tr<ExactCoeff> for &'a ExactCoeff {
            type Output = ExactCoeff;
            fn $m(self, o: ExactCoeff) -> ExactCoeff { self.$m(&o) }
        }
    )*};
}
owned_binops!(Add add, Sub sub, Mul mul);

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<&ExactCoeff> for &ExactCoeff {
    type Output = ExactCoeff;
    /// Panics on division by zero; use [`ExactCoeff::inv`] for a fallible form.
    fn div(self, o: &ExactCoeff) -> ExactCoeff {
        self * &o.inv().expect("division by zero in ℚ(i)[√2]")
    }
}

impl AddAssign<&ExactCoeff> for ExactCoeff {
    fn add_assign(&mut self, o: &ExactCoeff) {
        self.p = self.p.add_ref(&o.p);
        self.q = self.q.add_ref(&o.q);
    }
}

impl SubAssign<&ExactCoeff> for ExactCoeff {
    fn sub_assign(&mut self, o: &ExactCoeff) {
        self.p = self.p.sub_ref(&o.p);
        self.q = self.q.sub_ref(&o.q);
    }
}

impl MulAssign<&ExactCoeff> for ExactCoeff {
    fn mul_assign(&mut self, o: &ExactCoeff) {
        *self = &*self * o;
    }
}

impl fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn gauss(g: &GaussRational) -> String {
            match (g.re.is_zero(), g.im.is_zero()) {
                (_, true) => format!("{}", g.re),
                (true, false) => format!("{}i", g.im),
                (false, false) => {
                    if g.im.is_negative() {
                        format!("({}-{}i)", g.re, -&g.im)
                    } else {
                        format!("({}+{}i)", g.re, g.im)
                    }
                }
            }
        }
        match (self.p.is_zero(), self.q.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", gauss(&self.p)),
            (true, false) => write!(f, "{}√2", gauss(&self.q)),
            (false, false) => write!(f, "({} + {}√2)", gauss(&self.p), gauss(&self.q)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ExactCoeff::sqrt2();
        assert_eq!(&s * &s, ExactCoeff::from_int(2));
        assert_eq!(&ExactCoeff::inv_sqrt2() * &s, ExactCoeff::one());
    }

    #[test]
    fn inverse_of_mixed_element() {
        let a = ExactCoeff::new(
            GaussRational::new(rat(3, 2), rat(-1, 3)),
            GaussRational::new(rat(5, 7), rat(2, 1)),
        );
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, ExactCoeff::one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(ExactCoeff::zero().inv().is_err());
    }

    #[test]
    fn conj_distributes_over_sqrt2() {
        let a = ExactCoeff::new(
            GaussRational::new(rat(1, 1), rat(2, 1)),
            GaussRational::new(rat(0, 1), rat(-3, 1)),
        );
        let c = a.conj();
        assert_eq!(c.rational_part(), &GaussRational::new(rat(1, 1), rat(-2, 1)));
        assert_eq!(c.sqrt2_part(), &GaussRational::new(rat(0, 1), rat(3, 1)));
        let z = a.to_complex();
        assert!((c.to_complex() - z.conj()).norm() < 1e-12);
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((rat_to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
