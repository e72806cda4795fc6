use fockcalc::quantize::{berezin_diag, wick_quantize};
use fockcalc::random::{self, seeded};
use fockcalc::symalg::{Monomial, MultiIndex, WeylSymbol, WickSymbol};
use fockcalc::symmaps::{
    diag_difference, elliptic_check, principal_symbols, weyl_to_wick, wick_to_antiwick_expansion, wick_to_weyl,
    PrincipalPart,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn monomials(dim: usize, max: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for total in 0..=max {
        for a in 0..=total {
            for f in MultiIndex::of_degree(dim, a) {
                for s in MultiIndex::of_degree(dim, total - a) {
                    out.push(Monomial::new(f.clone(), s));
                }
            }
        }
    }
    out
}

#[test]
fn round_trip_on_monomials() {
    for d in 1..=2 {
        for m in monomials(d, 6) {
            let w = WeylSymbol::monomial(d, m.first.clone(), m.second.clone(), fockcalc::symalg::ExactCoeff::one());
            assert_eq!(wick_to_weyl(&weyl_to_wick(&w).unwrap()), w, "{m:?}");
            let a = WickSymbol::monomial(d, m.first.clone(), m.second.clone(), fockcalc::symalg::ExactCoeff::one());
            assert_eq!(weyl_to_wick(&wick_to_weyl(&a)).unwrap(), a, "{m:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn assignment_preserves_degree(seed in any::<u64>(), d in 1usize..=2) {
        let w = random::weyl_symbol(&mut seeded(seed), d, 5, 5, false);
        prop_assert_eq!(weyl_to_wick(&w).unwrap().degree(), w.degree());
    }

    #[test]
    fn principal_symbol_is_top_part(seed in any::<u64>(), d in 1usize..=2) {
        let w = random::weyl_symbol(&mut seeded(seed), d, 5, 5, false);
        let (wp, ap) = principal_symbols(&w).unwrap();
        prop_assert_eq!(wp, w.top_part());
        prop_assert_eq!(ap, weyl_to_wick(&w).unwrap().top_part());
    }

    #[test]
    fn diagonal_law(seed in any::<u64>(), d in 1usize..=2) {
        let w = random::weyl_symbol(&mut seeded(seed), d, 6, 6, false);
        prop_assert!(diag_difference(&w).unwrap().within_bound());
    }

    #[test]
    fn real_symbols_have_real_diagonals(seed in any::<u64>(), d in 1usize..=2) {
        let w = random::weyl_symbol(&mut seeded(seed), d, 4, 5, true);
        let a = weyl_to_wick(&w).unwrap();
        // Exact: the Wick symbol of a real Weyl symbol is its own adjoint symbol.
        prop_assert_eq!(&a.conj(), &a);
        let diag = berezin_diag(&a);
        for k in 0..8 {
            let t = k as f64 * 0.7;
            let pt: Vec<Complex64> = (0..d).map(|j| Complex64::new(t.cos() + j as f64, t.sin() * 1.5)).collect();
            let v = diag.eval(&pt).unwrap();
            prop_assert!(v.im.abs() <= 1e-12 * v.norm().max(1.0));
        }
    }

    #[test]
    fn expansion_reconstructs_the_matrix(seed in any::<u64>()) {
        let a = random::wick_symbol(&mut seeded(seed), 1, 3, 3, 4);
        let e = wick_to_antiwick_expansion(&a, a.degree_first());
        prop_assert!(e.remainder.is_zero());
        let lhs = wick_quantize(&e.reconstruction()).matrix(12).unwrap();
        prop_assert_eq!(lhs, wick_quantize(&a).matrix(12).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn ellipticity_transfers(seed in any::<u64>(), d in 1usize..=2, real in any::<bool>()) {
        let mut rng = seeded(seed);
        let deg = 2 * (1 + (seed % 2) as usize);
        let w = random::homogeneous_weyl(&mut rng, d, deg, 4, real);
        let (_, ap) = principal_symbols(&w).unwrap();
        let lhs = elliptic_check(PrincipalPart::Weyl(&w), 2000, 1e-9).unwrap();
        let rhs = elliptic_check(PrincipalPart::WickDiagonal(&ap), 2000, 1e-9).unwrap();
        prop_assert_eq!(lhs.is_elliptic(), rhs.is_elliptic(), "{} vs {}", lhs.min_sphere_value, rhs.min_sphere_value);
        prop_assert_eq!(lhs.positive, rhs.positive);
    }
}
