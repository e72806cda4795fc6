//! The complex twisted product: composition of Wick operators at symbol level.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::symalg::{ExactCoeff, GaussIntegrand, MultiIndex, WeylSymbol, WickSymbol};
use crate::symmaps::{weyl_to_wick, wick_to_weyl};

fn check_dims(a1: &WickSymbol, a2: &WickSymbol) -> Result<()> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch { expected: a1.dim(), found: a2.dim() });
    }
    Ok(())
}

/// `a₁ # a₂ = Σ_κ (1/κ!) (∂_w̄^κ a₁)(∂_z^κ a₂)`, from commuting `∂^{γ₁}` past `z^{β₂}`.
pub fn twisted_product(a1: &WickSymbol, a2: &WickSymbol) -> Result<WickSymbol> {
    check_dims(a1, a2)?;
    let d = a1.dim();
    let top = a1.degree_second().min(a2.degree_first());
    let mut out = WickSymbol::zero(d);
    for kappa in MultiIndex::up_to_degree(d, top) {
        let l = a1.diff_second(&kappa)?;
        if l.is_zero() {
            continue;
        }
        let r = a2.diff_first(&kappa)?;
        if r.is_zero() {
            continue;
        }
        let w = ExactCoeff::from_rational(BigRational::new(BigInt::from(1), kappa.factorial()));
        out = &out + &(&l * &r).scale(&w);
    }
    Ok(out)
}

/// Same product through the Gaussian integral
/// `π^{−d} ∫ a₁(z, u) a₂(u, w) e^{−(u−z, u−w)} dλ(u)`.
pub fn twisted_product_oracle(a1: &WickSymbol, a2: &WickSymbol) -> Result<WickSymbol> {
    check_dims(a1, a2)?;
    let d = a1.dim();
    let zero = MultiIndex::zeros(d);
    let mut integrand = GaussIntegrand::new(d);
    // a₁(z, u) = Σ c z^β ū^γ and a₂(u, w) = Σ c' u^β' w̄^γ'.
    for (m1, c1) in a1.terms() {
        let outer1 = WickSymbol::monomial(d, m1.first.clone(), zero.clone(), c1.clone());
        for (m2, c2) in a2.terms() {
            let outer2 = WickSymbol::monomial(d, zero.clone(), m2.second.clone(), c2.clone());
            integrand.add_term(m2.first.clone(), m1.second.clone(), &(&outer1 * &outer2))?;
        }
    }
    Ok(integrand.reduce())
}

/// `∂_{z_j}` and `∂_{w̄_j}` are derivations of `#`; checks both exactly.
pub fn product_rule_check(a1: &WickSymbol, a2: &WickSymbol, j: usize) -> Result<bool> {
    check_dims(a1, a2)?;
    let d = a1.dim();
    if j >= d {
        return Err(Error::DimensionMismatch { expected: d, found: j + 1 });
    }
    let e = MultiIndex::unit(d, j);
    let prod = twisted_product(a1, a2)?;

    let lhs = prod.diff_first(&e)?;
    let rhs = &twisted_product(&a1.diff_first(&e)?, a2)? + &twisted_product(a1, &a2.diff_first(&e)?)?;
    let z_rule = lhs == rhs;

    let lhs = prod.diff_second(&e)?;
    let rhs = &twisted_product(&a1.diff_second(&e)?, a2)? + &twisted_product(a1, &a2.diff_second(&e)?)?;
    Ok(z_rule && lhs == rhs)
}

/// Weyl product, transported through the Wick side.
pub fn weyl_product(a: &WeylSymbol, b: &WeylSymbol) -> Result<WeylSymbol> {
    let p = twisted_product(&weyl_to_wick(a)?, &weyl_to_wick(b)?)?;
    Ok(wick_to_weyl(&p))
}
