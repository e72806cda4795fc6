//! Truncated Fock space and operator matrices.
//!
//! Exact matrices live in the unnormalized monomial basis `z^α`: entry
//! `M[β][α]` is the coefficient of `z^β` in `Op z^α`, which stays in the
//! coefficient field. Passing to the orthonormal basis `e_α = z^α/√α!`
//! multiplies by `√(β!/α!)`, done only when converting to floating point.
//!
//! Exact columns are stored sparsely (operators with polynomial symbols are
//! banded); floating matrices are dense.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symalg::coeff::rat_to_f64;
use crate::symalg::{ExactCoeff, MultiIndex};

/// Monomials `z^α` with `|α| ≤ cutoff`, in graded-lex order.
#[derive(Debug, PartialEq, Eq)]
pub struct FockBasis {
    dim: usize,
    cutoff: usize,
    indices: Vec<MultiIndex>,
    factorials: Vec<BigInt>,
    lookup: HashMap<MultiIndex, usize>,
}

impl FockBasis {
    pub fn new(dim: usize, cutoff: usize) -> Arc<Self> {
        let indices = MultiIndex::up_to_degree(dim, cutoff);
        let factorials = indices.iter().map(MultiIndex::factorial).collect();
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Arc::new(Self { dim, cutoff, indices, factorials, lookup })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, pos: usize) -> &MultiIndex {
        &self.indices[pos]
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn factorial(&self, pos: usize) -> &BigInt {
        &self.factorials[pos]
    }

    /// `√(β!/α!)`, the rescaling from monomial to orthonormal coordinates.
    pub fn norm_ratio(&self, row: usize, col: usize) -> f64 {
        let r = BigRational::new(self.factorials[row].clone(), self.factorials[col].clone());
        rat_to_f64(&r).sqrt()
    }
}

/// One normal-ordered term `coeff · z^β ∂^γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalTerm {
    pub beta: MultiIndex,
    pub gamma: MultiIndex,
    pub coeff: ExactCoeff,
}

/// An analytic polynomial `F = Σ c_α z^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockPoly {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, ExactCoeff>,
}

impl FockPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn monomial(alpha: MultiIndex, c: ExactCoeff) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, &c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: &ExactCoeff) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(alpha).or_insert_with(ExactCoeff::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> ExactCoeff {
        self.coeffs.get(alpha).cloned().unwrap_or_else(ExactCoeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ExactCoeff)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &ExactCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, v) in &self.coeffs {
            out.add_term(a.clone(), &(v * c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, v) in &other.coeffs {
            out.add_term(a.clone(), v);
        }
        out
    }

    /// `⟨F, G⟩ = Σ F_α conj(G_α) α!` in the Fock inner product.
    pub fn inner(&self, other: &Self) -> ExactCoeff {
        let mut acc = ExactCoeff::zero();
        for (a, v) in &self.coeffs {
            if let Some(w) = other.coeffs.get(a) {
                acc += &(v * &w.conj()).scale_int(&a.factorial());
            }
        }
        acc
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(a, c)| {
                a.entries().iter().zip(z).fold(c.to_complex(), |acc, (&e, &zj)| acc * zj.powu(e))
            })
            .sum()
    }
}

/// `coeff · z^β ∂^γ F`, exact and untruncated.
pub fn apply_normal_ordered(term: &NormalTerm, f: &FockPoly) -> Result<FockPoly> {
    for d in [term.beta.dim(), term.gamma.dim()] {
        if d != f.dim {
            return Err(Error::DimensionMismatch { expected: f.dim, found: d });
        }
    }
    let mut out = FockPoly::zero(f.dim);
    for (alpha, c) in &f.coeffs {
        if let Some((target, k)) = apply_to_monomial(&term.beta, &term.gamma, alpha) {
            out.add_term(target, &(c * &term.coeff).scale_int(&k));
        }
    }
    Ok(out)
}

/// `z^β ∂^γ z^α = α!/(α−γ)! · z^{α−γ+β}`.
fn apply_to_monomial(beta: &MultiIndex, gamma: &MultiIndex, alpha: &MultiIndex) -> Option<(MultiIndex, BigInt)> {
    let rest = alpha.checked_sub(gamma)?;
    Some((rest.add(beta), alpha.falling(gamma)))
}

pub fn apply_all(terms: &[NormalTerm], f: &FockPoly) -> Result<FockPoly> {
    let mut out = FockPoly::zero(f.dim);
    for t in terms {
        out = out.add(&apply_normal_ordered(t, f)?);
    }
    Ok(out)
}

/// Exact operator matrix in the monomial basis, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    basis: Arc<FockBasis>,
    cols: Vec<BTreeMap<usize, ExactCoeff>>,
    band: usize,
}

impl ExactMatrix {
    fn from_cols(basis: Arc<FockBasis>, cols: Vec<BTreeMap<usize, ExactCoeff>>) -> Self {
        let band = cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| {
                let dj = basis.index(j).total();
                let basis = &basis;
                col.keys().map(move |&i| basis.index(i).total().abs_diff(dj))
            })
            .max()
            .unwrap_or(0);
        Self { basis, cols, band }
    }

    pub fn identity(basis: Arc<FockBasis>) -> Self {
        let cols = (0..basis.len()).map(|j| BTreeMap::from([(j, ExactCoeff::one())])).collect();
        Self::from_cols(basis, cols)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn get(&self, row: usize, col: usize) -> ExactCoeff {
        self.cols[col].get(&row).cloned().unwrap_or_else(ExactCoeff::zero)
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ExactCoeff)> {
        self.cols.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(&i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::ShapeMismatch { rows: other.size(), cols: other.size(), expected: self.size() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                for (&i, v) in b {
                    let e = c.entry(i).or_insert_with(ExactCoeff::zero);
                    *e += v;
                }
                c.retain(|_, v| !v.is_zero());
                c
            })
            .collect();
        Ok(Self::from_cols(self.basis.clone(), cols))
    }

    pub fn scale(&self, s: &ExactCoeff) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().map(|(&i, v)| (i, v * s)).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self::from_cols(self.basis.clone(), cols)
    }

    /// Matrix product in the monomial basis (agrees with the orthonormal one
    /// since both are related by the same diagonal similarity).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let cols = other
            .cols
            .par_iter()
            .map(|bcol| {
                let mut c: BTreeMap<usize, ExactCoeff> = BTreeMap::new();
                for (&k, b) in bcol {
                    for (&i, a) in &self.cols[k] {
                        let e = c.entry(i).or_insert_with(ExactCoeff::zero);
                        *e += &(a * b);
                    }
                }
                c.retain(|_, v| !v.is_zero());
                c
            })
            .collect();
        Ok(Self::from_cols(self.basis.clone(), cols))
    }

    /// Matrix of the Hilbert-space adjoint: `M*[β][α] = conj(M[α][β]) · α!/β!`.
    pub fn adjoint(&self) -> Self {
        let n = self.size();
        let mut cols: Vec<BTreeMap<usize, ExactCoeff>> = vec![BTreeMap::new(); n];
        for (r, c, v) in self.entries() {
            let ratio = BigRational::new(self.basis.factorial(r).clone(), self.basis.factorial(c).clone());
            cols[r].insert(c, v.conj().scale_rational(&ratio));
        }
        Self::from_cols(self.basis.clone(), cols)
    }

    /// `(H, S)` with `H = (M + M*)/2` self-adjoint and `S = (M − M*)/2` skew.
    pub fn hermitian_split(&self) -> (Self, Self) {
        let adj = self.adjoint();
        let half = ExactCoeff::from_ratio(1, 2);
        let h = self.add(&adj).expect("same basis").scale(&half);
        let s = self.add(&adj.scale(&ExactCoeff::from_int(-1))).expect("same basis").scale(&half);
        (h, s)
    }

    /// Top-left block on the smaller cutoff.
    pub fn restrict(&self, cutoff: usize) -> Self {
        let small = FockBasis::new(self.basis.dim(), cutoff.min(self.basis.cutoff()));
        let n = small.len();
        let cols = self.cols[..n].iter().map(|c| c.range(..n).map(|(&i, v)| (i, v.clone())).collect()).collect();
        Self::from_cols(small, cols)
    }

    /// Matrix entry in the orthonormal basis.
    pub fn normalized_entry(&self, row: usize, col: usize) -> Complex64 {
        self.get(row, col).to_complex() * self.basis.norm_ratio(row, col)
    }

    pub fn to_float(&self) -> FloatMatrix {
        let n = self.size();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.to_complex() * self.basis.norm_ratio(r, c);
        }
        FloatMatrix { basis: self.basis.clone(), data: m, band: self.band }
    }

    /// `Op F` truncated to the basis.
    pub fn apply(&self, f: &FockPoly) -> FockPoly {
        let mut out = FockPoly::zero(self.basis.dim());
        for (alpha, c) in f.terms() {
            if let Some(j) = self.basis.position(alpha) {
                for (&i, v) in &self.cols[j] {
                    out.add_term(self.basis.index(i).clone(), &(v * c));
                }
            }
        }
        out
    }
}

/// Exact matrix of `Σ coeff · z^β ∂^γ` on `|α| ≤ cutoff`, compressed to the basis.
pub fn matrix_of(terms: &[NormalTerm], dim: usize, cutoff: usize) -> Result<ExactMatrix> {
    for t in terms {
        for d in [t.beta.dim(), t.gamma.dim()] {
            if d != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: d });
            }
        }
    }
    let basis = FockBasis::new(dim, cutoff);
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|j| {
            let alpha = basis.index(j);
            let mut col: BTreeMap<usize, ExactCoeff> = BTreeMap::new();
            for t in terms {
                if let Some((target, k)) = apply_to_monomial(&t.beta, &t.gamma, alpha) {
                    if let Some(i) = basis.position(&target) {
                        let e = col.entry(i).or_insert_with(ExactCoeff::zero);
                        *e += &t.coeff.scale_int(&k);
                    }
                }
            }
            col.retain(|_, v| !v.is_zero());
            col
        })
        .collect();
    Ok(ExactMatrix::from_cols(basis, cols))
}

/// Dense floating matrix in the orthonormal basis.
#[derive(Clone, Debug)]
pub struct FloatMatrix {
    basis: Arc<FockBasis>,
    data: DMatrix<Complex64>,
    band: usize,
}

impl FloatMatrix {
    pub fn new(basis: Arc<FockBasis>, data: DMatrix<Complex64>) -> Result<Self> {
        let n = basis.len();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::ShapeMismatch { rows: data.nrows(), cols: data.ncols(), expected: n });
        }
        let mut band = 0;
        for c in 0..n {
            for r in 0..n {
                if data[(r, c)] != Complex64::new(0.0, 0.0) {
                    band = band.max(basis.index(r).total().abs_diff(basis.index(c).total()));
                }
            }
        }
        Ok(Self { basis, data, band })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn adjoint(&self) -> Self {
        Self { basis: self.basis.clone(), data: self.data.adjoint(), band: self.band }
    }

    pub fn hermitian_split(&self) -> (Self, Self) {
        let adj = self.data.adjoint();
        let h = (&self.data + &adj) * Complex64::new(0.5, 0.0);
        let s = (&self.data - &adj) * Complex64::new(0.5, 0.0);
        (
            Self { basis: self.basis.clone(), data: h, band: self.band },
            Self { basis: self.basis.clone(), data: s, band: self.band },
        )
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |M − M*|`.
    pub fn self_adjoint_deviation(&self) -> f64 {
        (&self.data - self.data.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `⟨M u, v⟩` for orthonormal-coordinate vectors.
    pub fn form(&self, u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
        v.dotc(&(&self.data * u))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = self.basis.indices().iter().map(ToString::to_string).collect();
        w.write_record(&header).map_err(csv_err)?;
        for r in 0..self.size() {
            let row: Vec<String> = (0..self.size()).map(|c| format_complex(self.data[(r, c)])).collect();
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Internal(e.to_string()))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

/// `re+imi` with 17 significant digits.
pub fn format_complex(v: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", v.re, v.im)
}

/// All eigenvalues of a self-adjoint matrix, ascending.
pub fn eigenvalues_sym(h: &FloatMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let scale = h.max_abs().max(1.0);
    let dev = h.self_adjoint_deviation();
    if dev > tol * scale {
        return Err(Error::NotSelfAdjoint { deviation: dev, tol: tol * scale });
    }
    if h.size() == 0 {
        return Err(Error::EmptyGrid);
    }
    // Symmetrize exactly so round-off in the input cannot leak into the solver.
    let sym = (&h.data + h.data.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, tol.clamp(f64::EPSILON, 1e-10), max_iter)
        .ok_or_else(|| Error::NonConvergence(format!("eigensolver exceeded {max_iter} iterations")))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Smallest eigenvalue of a self-adjoint matrix.
pub fn min_eig_sym(h: &FloatMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    Ok(eigenvalues_sym(h, tol, max_iter)?[0])
}
