//! Seeded generators for randomized suites. Same seed, same symbols.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::symalg::{rat, AwSymbol, ExactCoeff, Monomial, MultiIndex, Poly, SymbolKind, WeylSymbol, WickSymbol};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero Gaussian rational, with a `√2` part now and then.
pub fn coeff<R: Rng>(rng: &mut R) -> ExactCoeff {
    loop {
        let den = if rng.random_bool(0.25) { 2 } else { 1 };
        let p = ExactCoeff::gaussian_int(rng.random_range(-3..=3), rng.random_range(-3..=3))
            .scale_rational(&rat(1, den));
        let c = if rng.random_bool(0.15) {
            &p + &ExactCoeff::sqrt2().scale_rational(&rat(rng.random_range(-2..=2), 1))
        } else {
            p
        };
        if !c.is_zero() {
            return c;
        }
    }
}

/// Real nonzero rational with small numerator and denominator.
pub fn real_coeff<R: Rng>(rng: &mut R) -> ExactCoeff {
    loop {
        let n = rng.random_range(-4..=4);
        if n != 0 {
            return ExactCoeff::from_ratio(n, rng.random_range(1..=3));
        }
    }
}

fn index_with_total<R: Rng>(rng: &mut R, dim: usize, total: usize) -> MultiIndex {
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.random_range(0..dim)] += 1;
    }
    MultiIndex::new(e)
}

fn random_poly<K: SymbolKind, R: Rng>(
    rng: &mut R,
    dim: usize,
    max_first: usize,
    max_second: usize,
    max_total: usize,
    terms: usize,
    real: bool,
) -> Poly<K> {
    let mut p = Poly::<K>::zero(dim);
    while p.num_terms() < terms.max(1) {
        let a = rng.random_range(0..=max_first);
        let b = rng.random_range(0..=max_second.min(max_total.saturating_sub(a)));
        if a + b > max_total {
            continue;
        }
        let m = Monomial::new(index_with_total(rng, dim, a), index_with_total(rng, dim, b));
        let c = if real { real_coeff(rng) } else { coeff(rng) };
        p.add_term(m, &c);
    }
    p
}

/// Wick symbol with `deg_z ≤ max_z`, `deg_w̄ ≤ max_w`, total `≤ max_z + max_w`.
pub fn wick_symbol<R: Rng>(rng: &mut R, dim: usize, max_z: usize, max_w: usize, terms: usize) -> WickSymbol {
    random_poly(rng, dim, max_z, max_w, max_z + max_w, terms, false)
}

/// Wick symbol of total degree `≤ degree`.
pub fn wick_of_degree<R: Rng>(rng: &mut R, dim: usize, degree: usize, terms: usize) -> WickSymbol {
    random_poly(rng, dim, degree, degree, degree, terms, false)
}

/// Weyl symbol of total degree `≤ degree`; real coefficients when `real`.
pub fn weyl_symbol<R: Rng>(rng: &mut R, dim: usize, degree: usize, terms: usize, real: bool) -> WeylSymbol {
    random_poly(rng, dim, degree, degree, degree, terms, real)
}

/// Weyl symbol homogeneous of exactly `degree`.
pub fn homogeneous_weyl<R: Rng>(rng: &mut R, dim: usize, degree: usize, terms: usize, real: bool) -> WeylSymbol {
    loop {
        let mut p = WeylSymbol::zero(dim);
        for _ in 0..terms.max(1) {
            let a = rng.random_range(0..=degree);
            let m = Monomial::new(index_with_total(rng, dim, a), index_with_total(rng, dim, degree - a));
            p.add_term(m, &if real { real_coeff(rng) } else { coeff(rng) });
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// `Σ_k |p_k(w)|²` for `count` random analytic polynomials `p_k` of degree `≤ degree`.
pub fn sum_of_squares<R: Rng>(rng: &mut R, dim: usize, count: usize, degree: usize) -> AwSymbol {
    let mut out = AwSymbol::zero(dim);
    for _ in 0..count {
        let mut coeffs: Vec<(MultiIndex, ExactCoeff)> = Vec::new();
        for alpha in MultiIndex::up_to_degree(dim, degree) {
            if rng.random_bool(0.6) {
                coeffs.push((alpha, coeff(rng)));
            }
        }
        for (b, cb) in &coeffs {
            for (g, cg) in &coeffs {
                out.add_term(Monomial::new(b.clone(), g.clone()), &(cb * &cg.conj()));
            }
        }
    }
    out
}

/// One-variable polynomial with exactly `degree` as its degree; coefficients lowest first.
pub fn poly_1d<R: Rng>(rng: &mut R, degree: usize) -> Vec<Complex64> {
    let mut c: Vec<Complex64> =
        (0..=degree).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
    while c[degree].norm() < 0.5 {
        c[degree] = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = wick_symbol(&mut seeded(7), 2, 3, 3, 4);
        let b = wick_symbol(&mut seeded(7), 2, 3, 3, 4);
        assert_eq!(a, b);
        assert!(a.degree_first() <= 3 && a.degree_second() <= 3);
    }

    #[test]
    fn sum_of_squares_is_hermitian_symbol() {
        let s = sum_of_squares(&mut seeded(1), 1, 2, 2);
        assert_eq!(s, s.conj());
        let w = [Complex64::new(0.4, -1.3)];
        let v = s.eval(&w).unwrap();
        assert!(v.re >= 0.0 && v.im.abs() < 1e-12);
    }

    #[test]
    fn homogeneous_has_one_degree() {
        let p = homogeneous_weyl(&mut seeded(3), 2, 4, 5, true);
        assert_eq!(p.ensure_homogeneous().unwrap(), 4);
        assert!(p.has_real_coeffs());
    }
}
