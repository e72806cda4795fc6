//! Polynomial symbols in two blocks of `d` variables.
//!
//! All three symbol kinds share one representation: a sparse map from a
//! pair of multi-indices to a coefficient. The kind marker fixes what the
//! two blocks mean:
//!
//! | kind        | first block | second block |
//! |-------------|-------------|--------------|
//! | [`Wick`]    | `z`         | `w̄`          |
//! | [`Weyl`]    | `x`         | `ξ`          |
//! | [`AntiWick`]| `w`         | `w̄`          |
//!
//! Wick symbols never carry powers of `w` (only `w̄`), so semi-conjugate
//! analyticity holds by construction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;

use super::coeff::ExactCoeff;
use super::multi_index::MultiIndex;
use crate::error::{Error, Result};

pub trait SymbolKind: Clone + fmt::Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    /// Serialization tag.
    const TAG: &'static str;
    const FIRST: &'static str;
    const SECOND: &'static str;
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Wick;
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Weyl;
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntiWick;

impl SymbolKind for Wick {
    const TAG: &'static str = "wick";
    const FIRST: &'static str = "z";
    const SECOND: &'static str = "w̄";
}

impl SymbolKind for Weyl {
    const TAG: &'static str = "weyl";
    const FIRST: &'static str = "x";
    const SECOND: &'static str = "ξ";
}

impl SymbolKind for AntiWick {
    const TAG: &'static str = "aw";
    const FIRST: &'static str = "w";
    const SECOND: &'static str = "w̄";
}

/// Exponent pair `(first, second)` of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub first: MultiIndex,
    pub second: MultiIndex,
}

impl Monomial {
    pub fn new(first: impl Into<MultiIndex>, second: impl Into<MultiIndex>) -> Self {
        Self { first: first.into(), second: second.into() }
    }

    pub fn total(&self) -> usize {
        self.first.total() + self.second.total()
    }

    pub fn swapped(&self) -> Self {
        Self { first: self.second.clone(), second: self.first.clone() }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.first.cmp(&other.first))
            .then_with(|| self.second.cmp(&other.second))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<K: SymbolKind> {
    dim: usize,
    terms: BTreeMap<Monomial, ExactCoeff>,
    kind: PhantomData<K>,
}

pub type WickSymbol = Poly<Wick>;
pub type WeylSymbol = Poly<Weyl>;
pub type AwSymbol = Poly<AntiWick>;

impl<K: SymbolKind> Poly<K> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn constant(dim: usize, c: ExactCoeff) -> Self {
        Self::monomial(dim, MultiIndex::zeros(dim), MultiIndex::zeros(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, ExactCoeff::one())
    }

    pub fn monomial(dim: usize, first: impl Into<MultiIndex>, second: impl Into<MultiIndex>, c: ExactCoeff) -> Self {
        let mut p = Self::zero(dim);
        let m = Monomial::new(first, second);
        assert_eq!(m.first.dim(), dim, "monomial dimension");
        assert_eq!(m.second.dim(), dim, "monomial dimension");
        p.add_term(m, &c);
        p
    }

    /// The `j`-th variable of the first block.
    pub fn first_var(dim: usize, j: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, j), MultiIndex::zeros(dim), ExactCoeff::one())
    }

    /// The `j`-th variable of the second block.
    pub fn second_var(dim: usize, j: usize) -> Self {
        Self::monomial(dim, MultiIndex::zeros(dim), MultiIndex::unit(dim, j), ExactCoeff::one())
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactCoeff)>,
    {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            for idx in [&m.first, &m.second] {
                if idx.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: idx.dim() });
                }
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    /// Adds `c·m`, removing the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: &ExactCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactCoeff {
        self.terms.get(m).cloned().unwrap_or_else(ExactCoeff::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::total).max()
    }

    /// Largest `|first|` over all terms (`deg_z` for Wick symbols).
    pub fn degree_first(&self) -> usize {
        self.terms.keys().map(|m| m.first.total()).max().unwrap_or(0)
    }

    /// Largest `|second|` over all terms (`deg_w̄` for Wick symbols).
    pub fn degree_second(&self) -> usize {
        self.terms.keys().map(|m| m.second.total()).max().unwrap_or(0)
    }

    /// Terms of total degree exactly `n`.
    pub fn homogeneous_part(&self, n: usize) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.total() == n).map(|(m, c)| (m.clone(), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    /// Top-degree part; zero for the zero polynomial.
    pub fn top_part(&self) -> Self {
        match self.degree() {
            Some(n) => self.homogeneous_part(n),
            None => self.clone(),
        }
    }

    pub fn ensure_homogeneous(&self) -> Result<usize> {
        let min = self.terms.keys().map(Monomial::total).min().ok_or(Error::ZeroPolynomial)?;
        let max = self.degree().unwrap_or(0);
        if min != max {
            return Err(Error::NotHomogeneous { min, max });
        }
        Ok(max)
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim != other_dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other_dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut out = Self::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial { first: m1.first.add(&m2.first), second: m1.second.add(&m2.second) };
                out.add_term(m, &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactCoeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
            kind: PhantomData,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `∂^β` with respect to the first block.
    pub fn diff_first(&self, beta: &MultiIndex) -> Result<Self> {
        self.check_dim(beta.dim())?;
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if let Some(rest) = m.first.checked_sub(beta) {
                let f = m.first.falling(beta);
                out.add_term(Monomial { first: rest, second: m.second.clone() }, &c.scale_int(&f));
            }
        }
        Ok(out)
    }

    /// `∂^γ` with respect to the second block.
    pub fn diff_second(&self, gamma: &MultiIndex) -> Result<Self> {
        self.check_dim(gamma.dim())?;
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if let Some(rest) = m.second.checked_sub(gamma) {
                let f = m.second.falling(gamma);
                out.add_term(Monomial { first: m.first.clone(), second: rest }, &c.scale_int(&f));
            }
        }
        Ok(out)
    }

    /// Exchanges the two variable blocks.
    pub fn swap_blocks(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.swapped(), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    pub fn conj_coeffs(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
            kind: PhantomData,
        }
    }

    /// Reinterprets the two blocks under another kind without touching coefficients.
    pub fn relabel<T: SymbolKind>(&self) -> Poly<T> {
        Poly { dim: self.dim, terms: self.terms.clone(), kind: PhantomData }
    }

    /// `Σ c · first^β · second^γ` at raw block values.
    pub fn eval_blocks(&self, first: &[Complex64], second: &[Complex64]) -> Result<Complex64> {
        self.check_dim(first.len())?;
        self.check_dim(second.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            for (j, &e) in m.first.entries().iter().enumerate() {
                v *= first[j].powu(e);
            }
            for (j, &e) in m.second.entries().iter().enumerate() {
                v *= second[j].powu(e);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Exact linear change of variables.
    ///
    /// `matrix` is `2d × 2d`; row `i` expresses source variable `i` (first
    /// block `0..d`, second block `d..2d`) as a combination of the target
    /// variables in the same layout.
    pub fn substitute_linear<T: SymbolKind>(&self, matrix: &[Vec<ExactCoeff>]) -> Result<Poly<T>> {
        let n = 2 * self.dim;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, Vec::len),
                expected: n,
            });
        }
        let d = self.dim;
        let forms: Vec<Poly<T>> = matrix
            .iter()
            .map(|row| {
                let mut f = Poly::<T>::zero(d);
                for (j, c) in row.iter().enumerate() {
                    let var = if j < d { Poly::<T>::first_var(d, j) } else { Poly::<T>::second_var(d, j - d) };
                    f = &f + &var.scale(c);
                }
                f
            })
            .collect();
        let mut powers: Vec<Vec<Poly<T>>> = forms.iter().map(|f| vec![Poly::<T>::one(d), f.clone()]).collect();
        let mut get_pow = |i: usize, e: u32| -> Poly<T> {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap() * &forms[i];
                powers[i].push(next);
            }
            powers[i][e as usize].clone()
        };
        let mut out = Poly::<T>::zero(d);
        for (m, c) in &self.terms {
            let mut term = Poly::<T>::constant(d, c.clone());
            for (j, &e) in m.first.entries().iter().enumerate() {
                if e > 0 {
                    term = &term * &get_pow(j, e);
                }
            }
            for (j, &e) in m.second.entries().iter().enumerate() {
                if e > 0 {
                    term = &term * &get_pow(d + j, e);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Largest coefficient modulus; used to scale tolerances.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli, an upper bound for `|p|` on the unit sphere.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).sum()
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&ExactCoeff::from_bigint(BigInt::from(n)))
    }
}

impl Poly<Wick> {
    /// `a(z, w)` with `w` entering through `w̄`.
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        let wbar: Vec<Complex64> = w.iter().map(|v| v.conj()).collect();
        self.eval_blocks(z, &wbar)
    }

    /// Symbol of the adjoint operator, `(z, w) ↦ conj(a(w, z))`.
    pub fn conj(&self) -> Self {
        self.swap_blocks().conj_coeffs()
    }

    /// Wick symbol `z^β w̄^γ`.
    pub fn zw(dim: usize, beta: impl Into<MultiIndex>, gamma: impl Into<MultiIndex>, c: ExactCoeff) -> Self {
        Self::monomial(dim, beta, gamma, c)
    }
}

impl Poly<AntiWick> {
    pub fn eval(&self, w: &[Complex64]) -> Result<Complex64> {
        let wbar: Vec<Complex64> = w.iter().map(|v| v.conj()).collect();
        self.eval_blocks(w, &wbar)
    }

    /// Pointwise complex conjugate: `w^β w̄^γ ↦ w^γ w̄^β` with conjugated coefficient.
    pub fn conj(&self) -> Self {
        self.swap_blocks().conj_coeffs()
    }
}

impl Poly<Weyl> {
    pub fn eval_real(&self, x: &[f64], xi: &[f64]) -> Result<Complex64> {
        let xs: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let xis: Vec<Complex64> = xi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.eval_blocks(&xs, &xis)
    }

    /// Evaluation at the phase-space point `z = x + iξ`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let x: Vec<f64> = z.iter().map(|v| v.re).collect();
        let xi: Vec<f64> = z.iter().map(|v| v.im).collect();
        self.eval_real(&x, &xi)
    }

    /// Pointwise conjugate on real phase space.
    pub fn conj(&self) -> Self {
        self.conj_coeffs()
    }

    /// True when every coefficient is real, i.e. the symbol is real-valued.
    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(ExactCoeff::is_real)
    }
}

impl<K: SymbolKind> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, o: &Poly<K>) -> Poly<K> {
        self.checked_add(o).expect("dimension mismatch in polynomial addition")
    }
}

impl<K: SymbolKind> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, o: &Poly<K>) -> Poly<K> {
        self + &(-o)
    }
}

impl<K: SymbolKind> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.scale(&ExactCoeff::from_int(-1))
    }
}

impl<K: SymbolKind> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, o: &Poly<K>) -> Poly<K> {
        self.checked_mul(o).expect("dimension mismatch in polynomial product")
    }
}

impl<K: SymbolKind> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = |name: &str, j: usize, e: u32| -> String {
            let base = if self.dim == 1 { name.to_string() } else { format!("{name}{}", j + 1) };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        };
        // Highest degree first reads naturally.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (j, &e) in m.first.entries().iter().enumerate() {
                if e > 0 {
                    factors.push(var(K::FIRST, j, e));
                }
            }
            for (j, &e) in m.second.entries().iter().enumerate() {
                if e > 0 {
                    factors.push(var(K::SECOND, j, e));
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join(" "))?;
            } else {
                write!(f, "{c} {}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}
