use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::quantize::{antiwick_quantize, berezin_diag};
use crate::symalg::multi_index::binomial;
use crate::symalg::{AwSymbol, ExactCoeff, Monomial, MultiIndex, Poly, SymbolKind, WeylSymbol, Wick, WickSymbol};

fn i_over_sqrt2() -> ExactCoeff {
    &ExactCoeff::i() * &ExactCoeff::inv_sqrt2()
}

/// `x ↦ (u + v)/√2`, `ξ ↦ i(u − v)/√2` where `(u, v)` is `(z, w̄)` or `(w, w̄)`.
fn forward_matrix(d: usize) -> Vec<Vec<ExactCoeff>> {
    let s = ExactCoeff::inv_sqrt2();
    let is = i_over_sqrt2();
    let mut m = vec![vec![ExactCoeff::zero(); 2 * d]; 2 * d];
    for j in 0..d {
        m[j][j] = s.clone();
        m[j][d + j] = s.clone();
        m[d + j][j] = is.clone();
        m[d + j][d + j] = -&is;
    }
    m
}

/// `z ↦ (x − iξ)/√2`, `w̄ ↦ (x + iξ)/√2`.
fn inverse_matrix(d: usize) -> Vec<Vec<ExactCoeff>> {
    let s = ExactCoeff::inv_sqrt2();
    let is = i_over_sqrt2();
    let mut m = vec![vec![ExactCoeff::zero(); 2 * d]; 2 * d];
    for j in 0..d {
        m[j][j] = s.clone();
        m[j][d + j] = -&is;
        m[d + j][j] = s.clone();
        m[d + j][d + j] = is.clone();
    }
    m
}

fn signed_weight(alpha: &MultiIndex) -> ExactCoeff {
    let n = alpha.total() as u32;
    let denom = BigInt::from(2).pow(n) * alpha.factorial();
    let num = if n.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
    ExactCoeff::from_rational(BigRational::new(num, denom))
}

/// Weyl symbol of the Wick operator with symbol `a`:
/// `Σ_α (−1)^{|α|}/(2^{|α|} α!) ∂_z^α ∂_w̄^α a`, then `z = (x−iξ)/√2`, `w̄ = (x+iξ)/√2`.
pub fn wick_to_weyl(a: &WickSymbol) -> WeylSymbol {
    let d = a.dim();
    let top = a.degree_first().min(a.degree_second());
    let mut acc = WickSymbol::zero(d);
    for alpha in MultiIndex::up_to_degree(d, top) {
        let da = a.diff_first(&alpha).and_then(|p| p.diff_second(&alpha)).expect("same dimension");
        if !da.is_zero() {
            acc = &acc + &da.scale(&signed_weight(&alpha));
        }
    }
    acc.substitute_linear(&inverse_matrix(d)).expect("square substitution")
}

/// Wick symbol `S_V 𝔞`, the inverse of [`wick_to_weyl`].
///
/// On each total degree `n`, `wick_to_weyl` is the linear substitution plus
/// terms of degree `n − 2, n − 4, …`. Peeling off the top degree with the
/// inverse substitution therefore solves the graded-triangular system.
pub fn weyl_to_wick(w: &WeylSymbol) -> Result<WickSymbol> {
    let d = w.dim();
    let fwd = forward_matrix(d);
    let mut out = WickSymbol::zero(d);
    let mut residual = w.clone();
    while let Some(n) = residual.degree() {
        let top: WickSymbol = residual.homogeneous_part(n).substitute_linear(&fwd)?;
        residual = &residual - &wick_to_weyl(&top);
        out = &out + &top;
        if residual.degree().is_some_and(|m| m >= n) {
            return Err(Error::Internal(format!("degree block {n} failed to invert")));
        }
    }
    Ok(out)
}

/// `a₀^{aw}`: the Wick symbol of the anti-Wick operator with symbol `a₀`.
pub fn antiwick_to_wick(a0: &AwSymbol) -> WickSymbol {
    antiwick_quantize(a0).wick_symbol()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    pub order: usize,
    /// `a_α(w) = (∂_z^α ∂_w̄^α a)(w, w)` for `|α| ≤ order`.
    pub coefficients: BTreeMap<MultiIndex, AwSymbol>,
    pub remainder: WickSymbol,
}

impl ExpansionResult {
    /// `(−1)^{|α|}/α!`.
    pub fn weight(alpha: &MultiIndex) -> ExactCoeff {
        let sign = if alpha.total().is_multiple_of(2) { 1 } else { -1 };
        ExactCoeff::from_rational(BigRational::new(BigInt::from(sign), alpha.factorial()))
    }

    /// `Σ (−1)^{|α|}/α! · a_α^{aw}`, the Wick symbol of the truncated sum.
    pub fn reconstruction(&self) -> WickSymbol {
        let d = self.remainder.dim();
        let mut acc = WickSymbol::zero(d);
        for (alpha, c) in &self.coefficients {
            acc = &acc + &antiwick_to_wick(c).scale(&Self::weight(alpha));
        }
        acc
    }
}

/// Expands `Op(a) = Σ_{|α| ≤ N} (−1)^{|α|}/α! Op^{aw}(a_α) + Op(remainder)`.
pub fn wick_to_antiwick_expansion(a: &WickSymbol, order: usize) -> ExpansionResult {
    let d = a.dim();
    let mut coefficients = BTreeMap::new();
    for alpha in MultiIndex::up_to_degree(d, order) {
        let da = a.diff_first(&alpha).and_then(|p| p.diff_second(&alpha)).expect("same dimension");
        coefficients.insert(alpha, berezin_diag(&da));
    }
    let mut res = ExpansionResult { order, coefficients, remainder: WickSymbol::zero(d) };
    res.remainder = a - &res.reconstruction();
    res
}

/// `(z + w̄)^n` or `(z − w̄)^n` in one coordinate, expanded binomially.
fn binomial_power(d: usize, j: usize, n: u32, minus: bool) -> WickSymbol {
    let mut p = WickSymbol::zero(d);
    for k in 0..=n {
        let mut c = binomial(n, k);
        if minus && (n - k) % 2 == 1 {
            c = -c;
        }
        let mut b = vec![0; d];
        let mut g = vec![0; d];
        b[j] = k;
        g[j] = n - k;
        p.add_term(Monomial::new(b, g), &ExactCoeff::from_bigint(c));
    }
    p
}

/// `(𝔞_p, a_p)`: the top-degree Weyl part and
/// `a_p = 2^{−N/2} Σ_{|α+β|=N} c(α,β) i^{|β|} (z+w̄)^α (z−w̄)^β`.
pub fn principal_symbols(w: &WeylSymbol) -> Result<(WeylSymbol, WickSymbol)> {
    let n = w.degree().ok_or(Error::ZeroPolynomial)?;
    let d = w.dim();
    let top = w.homogeneous_part(n);
    let mut scale = ExactCoeff::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2).pow(n as u32 / 2)));
    if n % 2 == 1 {
        scale = &scale * &ExactCoeff::inv_sqrt2();
    }
    let mut ap = WickSymbol::zero(d);
    for (m, c) in top.terms() {
        let mut term = WickSymbol::constant(d, c * &ExactCoeff::i().pow(m.second.total() as u32));
        for j in 0..d {
            let (a, b) = (m.first.entries()[j], m.second.entries()[j]);
            if a > 0 {
                term = &term * &binomial_power(d, j, a, false);
            }
            if b > 0 {
                term = &term * &binomial_power(d, j, b, true);
            }
        }
        ap = &ap + &term;
    }
    Ok((top, ap.scale(&scale)))
}

/// `S_V𝔞(w, w) − 𝔞(√2 x, −√2 ξ)` with `w = x + iξ`, as a polynomial in `(w, w̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagDifference {
    pub difference: AwSymbol,
    pub symbol_degree: Option<usize>,
    pub difference_degree: Option<usize>,
}

impl DiagDifference {
    /// `deg(difference) ≤ deg 𝔞 − 2` (a zero difference always qualifies).
    pub fn within_bound(&self) -> bool {
        match (self.difference_degree, self.symbol_degree) {
            (None, _) => true,
            (Some(dd), Some(sd)) => dd + 2 <= sd,
            (Some(_), None) => false,
        }
    }
}

pub fn diag_difference(w: &WeylSymbol) -> Result<DiagDifference> {
    let d = w.dim();
    let diag = berezin_diag(&weyl_to_wick(w)?);
    // √2x = (w + w̄)/√2 and −√2ξ = i(w − w̄)/√2: the forward substitution again.
    let rescaled: AwSymbol = w.substitute_linear(&forward_matrix(d))?;
    let difference = &diag - &rescaled;
    Ok(DiagDifference { symbol_degree: w.degree(), difference_degree: difference.degree(), difference })
}

/// The diagonal `a(z, z)` as a polynomial in the real coordinates `(x, ξ)` of `z = x + iξ`.
pub fn wick_diagonal_real<K: SymbolKind>(a: &Poly<K>) -> WeylSymbol {
    let d = a.dim();
    let mut m = vec![vec![ExactCoeff::zero(); 2 * d]; 2 * d];
    for j in 0..d {
        m[j][j] = ExactCoeff::one();
        m[j][d + j] = ExactCoeff::i();
        m[d + j][j] = ExactCoeff::one();
        m[d + j][d + j] = -&ExactCoeff::i();
    }
    a.substitute_linear(&m).expect("square substitution")
}

/// Convenience: Wick symbol `Σ c z^β w̄^γ` from integer data (tests, examples).
pub fn wick_from_ints(dim: usize, terms: &[(&[u32], &[u32], i64)]) -> WickSymbol {
    let mut p = Poly::<Wick>::zero(dim);
    for (b, g, c) in terms {
        p.add_term(Monomial::new(b.to_vec(), g.to_vec()), &ExactCoeff::from_int(*c));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::rat;

    fn x(d: usize, j: usize) -> WeylSymbol {
        WeylSymbol::first_var(d, j)
    }

    fn xi(d: usize, j: usize) -> WeylSymbol {
        WeylSymbol::second_var(d, j)
    }

    fn ho() -> WeylSymbol {
        &x(1, 0).pow(2) + &xi(1, 0).pow(2)
    }

    #[test]
    fn number_symbol_to_weyl() {
        let got = wick_to_weyl(&wick_from_ints(1, &[(&[1], &[1], 1)]));
        let half = ExactCoeff::from_rational(rat(1, 2));
        let want = &ho().scale(&half) - &WeylSymbol::constant(1, half);
        assert_eq!(got, want);
    }

    #[test]
    fn harmonic_oscillator_to_wick() {
        assert_eq!(weyl_to_wick(&ho()).unwrap(), wick_from_ints(1, &[(&[1], &[1], 2), (&[0], &[0], 1)]));
    }

    #[test]
    fn generators() {
        let s = ExactCoeff::inv_sqrt2();
        let z = WickSymbol::first_var(1, 0);
        let wb = WickSymbol::second_var(1, 0);
        assert_eq!(weyl_to_wick(&x(1, 0)).unwrap(), (&z + &wb).scale(&s));
        assert_eq!(weyl_to_wick(&xi(1, 0)).unwrap(), (&z - &wb).scale(&(&ExactCoeff::i() * &s)));
        assert_eq!(wick_to_weyl(&(&z + &wb).scale(&s)), x(1, 0));
    }

    #[test]
    fn round_trip_low_degree() {
        for d in 1..=2 {
            for n in 0..=4 {
                for b in MultiIndex::up_to_degree(d, n) {
                    for g in MultiIndex::of_degree(d, n - b.total()) {
                        let w = WeylSymbol::monomial(d, b.clone(), g.clone(), ExactCoeff::one());
                        assert_eq!(wick_to_weyl(&weyl_to_wick(&w).unwrap()), w);
                        let a = WickSymbol::monomial(d, b.clone(), g.clone(), ExactCoeff::one());
                        assert_eq!(weyl_to_wick(&wick_to_weyl(&a)).unwrap(), a);
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_of_number_symbol() {
        let a = wick_from_ints(1, &[(&[1], &[1], 1)]);
        let e = wick_to_antiwick_expansion(&a, 1);
        assert!(e.remainder.is_zero());
        assert_eq!(e.coefficients[&MultiIndex::from([1])], AwSymbol::one(1));
    }

    #[test]
    fn truncated_expansion_leaves_a_constant() {
        // z²w̄² with N = 1: the α = 2 term 2·(1/2!) is missing.
        let a = wick_from_ints(1, &[(&[2], &[2], 1)]);
        assert!(wick_to_antiwick_expansion(&a, 2).remainder.is_zero());
        let r = wick_to_antiwick_expansion(&a, 1).remainder;
        assert_eq!(r, WickSymbol::constant(1, ExactCoeff::from_int(2)));
    }

    #[test]
    fn principal_symbol_examples() {
        let (wp, ap) = principal_symbols(&ho()).unwrap();
        assert_eq!(wp, ho());
        assert_eq!(ap, wick_from_ints(1, &[(&[1], &[1], 2)]));
        let (_, ap) = principal_symbols(&(&x(1, 0).pow(2) - &xi(1, 0).pow(2))).unwrap();
        assert_eq!(ap, wick_from_ints(1, &[(&[2], &[0], 1), (&[0], &[2], 1)]));
        assert!(matches!(principal_symbols(&WeylSymbol::zero(1)), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn diagonal_differences() {
        let dd = diag_difference(&ho()).unwrap();
        assert_eq!(dd.difference, AwSymbol::one(1));
        assert!(dd.within_bound());
        assert!(diag_difference(&x(1, 0)).unwrap().difference.is_zero());
        let dd = diag_difference(&x(1, 0).pow(4)).unwrap();
        assert!(dd.difference_degree.unwrap() <= 2);
    }
}
