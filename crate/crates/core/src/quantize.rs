//! Wick and anti-Wick quantization of polynomial symbols.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, ExactMatrix, FockPoly, NormalTerm};
use crate::symalg::serial::SymbolRecord;
use crate::symalg::{AwSymbol, ExactCoeff, Monomial, WickSymbol};

/// `Σ coeff · z^β ∂^γ`, kept in canonical (sorted, merged) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalOrderedOp {
    dim: usize,
    terms: Vec<NormalTerm>,
}

pub const NOPS_TAG: &str = "nops";

impl NormalOrderedOp {
    fn from_wick(a: &WickSymbol) -> Self {
        let terms = a
            .terms()
            .map(|(m, c)| NormalTerm { beta: m.first.clone(), gamma: m.second.clone(), coeff: c.clone() })
            .collect();
        Self { dim: a.dim(), terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[NormalTerm] {
        &self.terms
    }

    /// The Wick symbol under `z^β ∂^γ ↔ z^β w̄^γ`.
    pub fn wick_symbol(&self) -> WickSymbol {
        let terms = self.terms.iter().map(|t| (Monomial { first: t.beta.clone(), second: t.gamma.clone() }, t.coeff.clone()));
        WickSymbol::from_terms(self.dim, terms).expect("terms share the operator dimension")
    }

    pub fn matrix(&self, cutoff: usize) -> Result<ExactMatrix> {
        fock::matrix_of(&self.terms, self.dim, cutoff)
    }

    pub fn apply(&self, f: &FockPoly) -> Result<FockPoly> {
        fock::apply_all(&self.terms, f)
    }

    pub fn to_record(&self) -> SymbolRecord {
        let sym = self.wick_symbol();
        SymbolRecord::encode(self.dim, NOPS_TAG, sym.terms())
    }

    pub fn from_record(rec: &SymbolRecord) -> Result<Self> {
        if rec.kind != NOPS_TAG {
            return Err(Error::Malformed(format!("expected kind \"nops\", found {:?}", rec.kind)));
        }
        let sym = WickSymbol::from_terms(rec.dim, rec.decode_terms()?)?;
        Ok(Self::from_wick(&sym))
    }

    pub fn to_json(&self) -> String {
        self.to_record().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_record(&SymbolRecord::from_json(text)?)
    }
}

/// Replaces `w̄^γ` by `∂^γ` term by term.
pub fn wick_quantize(a: &WickSymbol) -> NormalOrderedOp {
    NormalOrderedOp::from_wick(a)
}

/// Brings `∂^γ ∘ z^β` into normal order:
/// `∂^γ(z^β F) = Σ_{κ ≤ min(β,γ)} C(γ,κ) β!/(β−κ)! z^{β−κ} ∂^{γ−κ} F`.
pub fn antiwick_quantize(a0: &AwSymbol) -> NormalOrderedOp {
    let d = a0.dim();
    let mut sym = WickSymbol::zero(d);
    for (m, c) in a0.terms() {
        let (beta, gamma) = (&m.first, &m.second);
        for kappa in beta.min(gamma).sub_indices() {
            let k = gamma.binomial(&kappa) * beta.falling(&kappa);
            let term = Monomial {
                first: beta.checked_sub(&kappa).expect("κ ≤ β"),
                second: gamma.checked_sub(&kappa).expect("κ ≤ γ"),
            };
            sym.add_term(term, &c.scale_int(&k));
        }
    }
    NormalOrderedOp::from_wick(&sym)
}

/// Floating kernel value; `saturated` is set when the exponent was clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub saturated: bool,
}

pub const EXP_CLAMP: f64 = 700.0;

/// `a(z, w) · e^{(z, w)}`.
pub fn kernel_eval(a: &WickSymbol, z: &[Complex64], w: &[Complex64]) -> Result<KernelValue> {
    if z.iter().chain(w).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Malformed("non-finite evaluation point".into()));
    }
    let sym = a.eval(z, w)?;
    let expo: Complex64 = z.iter().zip(w).map(|(zj, wj)| zj * wj.conj()).sum();
    let saturated = expo.re.abs() > EXP_CLAMP;
    let clamped = Complex64::new(expo.re.clamp(-EXP_CLAMP, EXP_CLAMP), expo.im);
    Ok(KernelValue { value: sym * clamped.exp(), saturated })
}

/// The Berezin diagonal `w ↦ a(w, w)`.
pub fn berezin_diag(a: &WickSymbol) -> AwSymbol {
    a.relabel()
}

/// Wick symbol `1 − 2 z w̄ + 2 z² w̄²` (d = 1): positive diagonal, yet
/// `⟨Op z, z⟩ = −1`.
pub fn counterexample_symbol() -> WickSymbol {
    let mut a = WickSymbol::one(1);
    a.add_term(Monomial::new([1], [1]), &ExactCoeff::from_int(-2));
    a.add_term(Monomial::new([2], [2]), &ExactCoeff::from_int(2));
    a
}
