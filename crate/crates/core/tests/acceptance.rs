//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use fockcalc::fock::FockPoly;
use fockcalc::numeric::antiwick_bound::{
    antiwick_bound_check, antiwick_symbol_quadrature, AwBoundOptions, AwEnvelope, AwQuadrature,
};
use fockcalc::numeric::bargmann::{
    assignment_via_stft, bargmann_coefficients, bargmann_quadrature, bargmann_via_stft, fock_monomial, hermite_series,
};
use fockcalc::numeric::certificate::{growth_certificate, CertGrid, GrowthForm};
use fockcalc::numeric::detector::{polynomial_detector, DetectorOptions};
use fockcalc::numeric::garding::garding_experiment;
use fockcalc::numeric::quadrature::{HermiteRule, UniformGrid};
use fockcalc::numeric::{Tolerances, WeightSpec};
use fockcalc::quantize::{berezin_diag, counterexample_symbol, wick_quantize};
use fockcalc::random::{self, seeded};
use fockcalc::symalg::{AwSymbol, ExactCoeff, Monomial, MultiIndex, WeylSymbol, WickSymbol};
use fockcalc::symmaps::{
    antiwick_to_wick, diag_difference, elliptic_check, principal_symbols, weyl_to_wick, wick_to_antiwick_expansion,
    wick_to_weyl, PrincipalPart, RadialGrid,
};
use fockcalc::twisted::{product_rule_check, twisted_product, twisted_product_oracle};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 25 points on a 5×5 lattice inside `|z| ≤ radius`.
fn lattice(radius: f64) -> Vec<Complex64> {
    let h = radius / 2.0f64.sqrt() / 2.0;
    (-2..=2).flat_map(|i| (-2..=2).map(move |j| c(i as f64 * h, j as f64 * h))).collect()
}

fn counterexample() -> Outcome {
    let a = counterexample_symbol();
    let n = AwSymbol::monomial(1, [1], [1], ExactCoeff::one());
    let one = AwSymbol::one(1);
    let expected = &(&one - &n).pow(2) + &n.pow(2);
    ensure(berezin_diag(&a) == expected, || format!("diagonal {} differs from {expected}", berezin_diag(&a)))?;
    let f = FockPoly::monomial(MultiIndex::from([1]), ExactCoeff::one());
    let form = wick_quantize(&a).apply(&f).map_err(e)?.inner(&f);
    ensure(form == ExactCoeff::from_int(-1), || format!("<Op z, z> = {form}"))?;
    Ok(format!("a(w,w) = {expected}, <Op z, z> = {form}"))
}

fn oscillator() -> Outcome {
    let x = WeylSymbol::first_var(1, 0);
    let xi = WeylSymbol::second_var(1, 0);
    let ho = &x.pow(2) + &xi.pow(2);
    let mut want = WickSymbol::zw(1, [1], [1], ExactCoeff::from_int(2));
    want.add_term(Monomial::new([0], [0]), &ExactCoeff::one());
    let got = weyl_to_wick(&ho).map_err(e)?;
    ensure(got == want, || format!("weyl_to_wick gave {got}"))?;
    for d in 1..=2 {
        let mut ho_d = WeylSymbol::zero(d);
        for j in 0..d {
            ho_d = &ho_d + &(&WeylSymbol::first_var(d, j).pow(2) + &WeylSymbol::second_var(d, j).pow(2));
        }
        let m = wick_quantize(&weyl_to_wick(&ho_d).map_err(e)?).matrix(32).map_err(e)?;
        let basis = m.basis().clone();
        for (i, j, v) in m.entries() {
            let law = ExactCoeff::from_int(2 * basis.index(j).total() as i64 + d as i64);
            ensure(i == j && *v == law, || format!("d={d}: entry ({i},{j}) = {v}"))?;
        }
        ensure(m.nnz() == basis.len(), || format!("d={d}: missing diagonal entries"))?;
    }
    Ok("2 z w̄ + 1; D=32 matrix is diag(2|α|+d) for d=1,2".into())
}

fn generators() -> Outcome {
    let r = ExactCoeff::inv_sqrt2();
    for d in 1..=3 {
        for j in 0..d {
            let x = WeylSymbol::first_var(d, j);
            let xi = WeylSymbol::second_var(d, j).scale(&ExactCoeff::i());
            let z = WickSymbol::first_var(d, j);
            let wb = WickSymbol::second_var(d, j);
            let cases = [
                ((&x - &xi).scale(&r), z.clone()),
                ((&x + &xi).scale(&r), wb.clone()),
                (x.clone(), (&z + &wb).scale(&r)),
                (WeylSymbol::second_var(d, j), (&z - &wb).scale(&(&r * &ExactCoeff::i()))),
            ];
            for (k, (weyl, wick)) in cases.iter().enumerate() {
                let got = weyl_to_wick(weyl).map_err(e)?;
                ensure(&got == wick, || format!("d={d} j={j} formula {k}: {got}"))?;
            }
        }
    }
    Ok("all four generator images exact for d=1,2,3".into())
}

fn round_trip() -> Outcome {
    let mut count = 0;
    for d in 1..=2 {
        for total in 0..=6 {
            for a in 0..=total {
                for f in MultiIndex::of_degree(d, a) {
                    for s in MultiIndex::of_degree(d, total - a) {
                        let w = WeylSymbol::monomial(d, f.clone(), s.clone(), ExactCoeff::one());
                        let back = wick_to_weyl(&weyl_to_wick(&w).map_err(e)?);
                        ensure(back == w, || format!("Weyl monomial {w}"))?;
                        let k = WickSymbol::monomial(d, f.clone(), s, ExactCoeff::one());
                        let back = weyl_to_wick(&wick_to_weyl(&k)).map_err(e)?;
                        ensure(back == k, || format!("Wick monomial {k}"))?;
                        count += 2;
                    }
                }
            }
        }
    }
    Ok(format!("{count} monomial round trips exact"))
}

fn random_pair(seed: u64) -> (WickSymbol, WickSymbol) {
    let mut rng = seeded(seed);
    let d = 1 + (seed % 2) as usize;
    (random::wick_of_degree(&mut rng, d, 3, 4), random::wick_of_degree(&mut rng, d, 3, 4))
}

fn twisted_dual_path() -> Outcome {
    for seed in 0..20u64 {
        let (a, b) = random_pair(seed);
        let p = twisted_product(&a, &b).map_err(e)?;
        ensure(p == twisted_product_oracle(&a, &b).map_err(e)?, || format!("seed {seed}: paths differ"))?;
        let band = a.degree().unwrap_or(0) + b.degree().unwrap_or(0);
        let cutoff = band + 4;
        let lhs = wick_quantize(&p).matrix(cutoff).map_err(e)?;
        let rhs = wick_quantize(&a).matrix(cutoff).map_err(e)?.mul(&wick_quantize(&b).matrix(cutoff).map_err(e)?).map_err(e)?;
        let basis = lhs.basis().clone();
        let interior = cutoff - band;
        for col in 0..basis.len() {
            for row in 0..basis.len() {
                if basis.index(col).total() <= interior && basis.index(row).total() <= interior {
                    ensure(lhs.get(row, col) == rhs.get(row, col), || format!("seed {seed}: block entry ({row},{col})"))?;
                }
            }
        }
    }
    Ok("20 pairs: coefficientwise equal, interior blocks equal".into())
}

fn product_rule() -> Outcome {
    for seed in 0..20u64 {
        let (a, b) = random_pair(100 + seed);
        for j in 0..a.dim() {
            ensure(product_rule_check(&a, &b, j).map_err(e)?, || format!("seed {seed}, coordinate {j}"))?;
        }
    }
    Ok("20 pairs, both derivations".into())
}

fn antiwick_expansion() -> Outcome {
    for seed in 0..20u64 {
        let a = random::wick_symbol(&mut seeded(200 + seed), 1, 3, 3, 5);
        let ex = wick_to_antiwick_expansion(&a, a.degree_first());
        ensure(ex.remainder.is_zero(), || format!("seed {seed}: remainder {}", ex.remainder))?;
        let lhs = wick_quantize(&ex.reconstruction()).matrix(12).map_err(e)?;
        ensure(lhs == wick_quantize(&a).matrix(12).map_err(e)?, || format!("seed {seed}: matrices differ"))?;
    }
    Ok("20 symbols, zero remainder, D=12 matrices equal".into())
}

fn diagonal_law() -> Outcome {
    let mut worst = 0usize;
    for seed in 0..50u64 {
        let mut rng = seeded(300 + seed);
        let d = 1 + (seed % 2) as usize;
        let w = random::weyl_symbol(&mut rng, d, 6, 6, false);
        let diff = diag_difference(&w).map_err(e)?;
        ensure(diff.within_bound(), || format!("seed {seed}: degree {:?} vs {:?}", diff.difference_degree, diff.symbol_degree))?;
        worst = worst.max(diff.difference_degree.map_or(0, |dd| dd + 2).saturating_sub(diff.symbol_degree.unwrap_or(0)));
    }
    Ok("50 symbols within deg − 2".into())
}

fn ellipticity() -> Outcome {
    let tol = Tolerances::default();
    let x = |d, j| WeylSymbol::first_var(d, j);
    let xi = |d, j| WeylSymbol::second_var(d, j);
    let i = ExactCoeff::i();
    let curated: Vec<(WeylSymbol, bool)> = vec![
        (&x(1, 0).pow(2) + &xi(1, 0).pow(2), true),
        (&x(1, 0).pow(2) - &xi(1, 0).pow(2), false),
        (&x(1, 0) * &xi(1, 0), false),
        (&x(1, 0).pow(4) + &xi(1, 0).pow(4), true),
        (&x(1, 0).pow(2) + &xi(1, 0).pow(2).scale(&i), true),
        (&x(1, 0) + &xi(1, 0).scale(&i), true),
        (x(1, 0), false),
        ((&x(1, 0).pow(2) + &xi(1, 0).pow(2)).pow(2), true),
        (&(&x(2, 0).pow(2) + &x(2, 1).pow(2)) + &(&xi(2, 0).pow(2) + &xi(2, 1).pow(2)), true),
        (&(&x(2, 0).pow(2) + &xi(2, 0).pow(2)) - &(&x(2, 1).pow(2) + &xi(2, 1).pow(2)), false),
    ];
    let check = |w: &WeylSymbol| -> Result<(bool, bool, bool, bool), String> {
        let (wp, ap) = principal_symbols(w).map_err(e)?;
        let real = elliptic_check(PrincipalPart::Weyl(&wp), tol.sphere_samples, tol.elliptic).map_err(e)?;
        let wick = elliptic_check(PrincipalPart::WickDiagonal(&ap), tol.sphere_samples, tol.elliptic).map_err(e)?;
        Ok((real.is_elliptic(), wick.is_elliptic(), real.positive, wick.positive))
    };
    for (k, (w, expect)) in curated.iter().enumerate() {
        let (r, wk, rp, wp) = check(w)?;
        ensure(r == *expect && wk == *expect && rp == wp, || format!("curated #{k} ({w}): real {r}, wick {wk}, positive {rp}/{wp}"))?;
    }
    let mut elliptic = 0;
    for seed in 0..50u64 {
        let mut rng = seeded(400 + seed);
        let d = 1 + (seed % 2) as usize;
        let deg = if rng.random_bool(0.5) { 2 } else { 4 };
        let real = rng.random_bool(0.5);
        let w = random::homogeneous_weyl(&mut rng, d, deg, 4, real);
        let (r, wk, rp, wp) = check(&w)?;
        ensure(r == wk && rp == wp, || format!("seed {seed} ({w}): real {r}, wick {wk}, positive {rp}/{wp}"))?;
        elliptic += r as usize;
    }
    Ok(format!("10 curated + 50 random agree ({elliptic} random elliptic)"))
}

fn garding() -> Outcome {
    let tol = Tolerances::default();
    let cutoffs = [8, 16, 24, 32];
    let grid = RadialGrid::default();
    let mut worst = f64::INFINITY;
    for seed in 0..10u64 {
        let a0 = random::sum_of_squares(&mut seeded(500 + seed), 1, 2, 3);
        let r = garding_experiment(&antiwick_to_wick(&a0), &cutoffs, &grid, &tol).map_err(e)?;
        for row in &r.rows {
            worst = worst.min(row.lambda_min);
            ensure(row.lambda_min >= -1e-10, || format!("seed {seed}, D={}: λ_min {}", row.cutoff, row.lambda_min))?;
        }
    }
    let mut spreads = Vec::new();
    for (eps, tilt) in [((1, 8), false), ((1, 4), false), ((3, 8), false), ((1, 4), true)] {
        let mut a = WickSymbol::zw(1, [1], [1], ExactCoeff::one());
        let ce = ExactCoeff::from_ratio(eps.0, eps.1);
        a.add_term(Monomial::new([2], [0]), &ce);
        a.add_term(Monomial::new([0], [2]), &ce);
        if tilt {
            // diagonal becomes 1 + |w|² + ε·2Re(w²) − Im w, still ≥ 0 for ε = 1/4
            let half_i = &ExactCoeff::i() * &ExactCoeff::from_ratio(1, 2);
            a.add_term(Monomial::new([0], [0]), &ExactCoeff::one());
            a.add_term(Monomial::new([1], [0]), &half_i);
            a.add_term(Monomial::new([0], [1]), &-&half_i);
        }
        let r = garding_experiment(&a, &cutoffs, &grid, &tol).map_err(e)?;
        ensure(r.pass, || format!("ε={}/{}: spreads {} / {}", eps.0, eps.1, r.lambda_spread, r.skew_spread))?;
        spreads.push(format!("{:.2e}", r.lambda_spread));
    }
    Ok(format!("anti-Wick min λ {worst:.3e}; perturbed spreads {}", spreads.join(", ")))
}

fn numerics() -> Outcome {
    let rule = HermiteRule::new(64).map_err(e)?;
    let mut worst = 0.0f64;
    for n in 0..=5u32 {
        let series = vec![(MultiIndex::from([n]), c(1.0, 0.0))];
        let f = hermite_series(&series);
        for z in lattice(2.0) {
            let want = fock_monomial(&MultiIndex::from([n]), &[z]);
            let kernel = bargmann_quadrature(|y: &[f64]| f(y), &[z], &rule);
            let coeff = bargmann_coefficients(&series, &[z]).map_err(e)?;
            worst = worst.max((kernel - want).norm()).max((coeff - want).norm());
        }
    }
    ensure(worst <= 1e-8, || format!("Bargmann of h_α off by {worst:e}"))?;

    let grid = UniformGrid { half_width: 8.0, points: 160 };
    let ho = &WeylSymbol::first_var(1, 0).pow(2) + &WeylSymbol::second_var(1, 0).pow(2);
    let wick = weyl_to_wick(&ho).map_err(e)?;
    let mut worst_s = 0.0f64;
    for (k, z) in lattice(1.0).into_iter().enumerate() {
        let w = c(0.3 - 0.1 * (k % 5) as f64, 0.2 * (k / 5) as f64 - 0.4);
        let got = assignment_via_stft(&ho, &[z], &[w], &grid).map_err(e)?;
        let want = wick.eval(&[z], &[w]).map_err(e)?;
        worst_s = worst_s.max((got - want).norm() / want.norm().max(1.0));
    }
    ensure(worst_s <= 1e-6, || format!("assignment/STFT identity off by {worst_s:e}"))?;

    let h1 = vec![(MultiIndex::from([1]), c(1.0, 0.0))];
    let f = hermite_series(&h1);
    let ug = UniformGrid::default();
    let mut worst_f = 0.0f64;
    for z in lattice(2.0) {
        let got = bargmann_via_stft(&f, &[z], &ug).map_err(e)?;
        worst_f = worst_f.max((got - z).norm() / z.norm().max(1.0));
    }
    ensure(worst_f <= 1e-6, || format!("factorization off by {worst_f:e}"))?;
    Ok(format!("Bargmann {worst:.1e}, assignment {worst_s:.1e}, factorization {worst_f:.1e}"))
}

fn bound_checks() -> Outcome {
    let rule = HermiteRule::new(64).map_err(e)?;
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let mut rng = seeded(600 + seed);
        let a0: AwSymbol = random::weyl_symbol(&mut rng, 1, 4, 5, false).relabel();
        let exact = antiwick_to_wick(&a0);
        let f = |u: &[Complex64]| a0.eval(u).expect("dimension");
        for k in 0..5 {
            let t = k as f64;
            let z = [c(1.2 * (0.9 * t).cos(), 1.1 * (1.3 * t).sin())];
            let w = [c(-0.8 * (0.4 * t).sin(), 1.3 * (0.7 * t).cos())];
            let got = antiwick_symbol_quadrature(&f, &z, &w, &rule);
            let want = exact.eval(&z, &w).map_err(e)?;
            worst = worst.max((got - want).norm() / want.norm().max(1.0));
        }
    }
    ensure(worst <= 1e-8, || format!("polynomial reproduction off by {worst:e}"))?;

    let kink = |u: &[Complex64]| c((-u[0].norm()).exp(), 0.0);
    let opts = AwBoundOptions {
        grid: CertGrid { radius: 4.0, count: 5 },
        quadrature: AwQuadrature::Polar { radial: 64, angular: 128 },
        envelope: AwEnvelope::Decay { s: 1.0 },
        stability_ratio: 1.1,
        quadrature_tol: Some(1e-8),
    };
    let rep = antiwick_bound_check(&kink, 1, &opts).map_err(e)?;
    ensure(rep.pass, || format!("e^(-|w|) fit unstable: {rep:?}"))?;

    let form = GrowthForm::ShubinBargmann { weight: WeightSpec::Polynomial { s: 2.0 }, n: 2.0 };
    let osc = |z: &[Complex64], w: &[Complex64]| 2.0 * z[0] * w[0].conj() + 1.0;
    let good = growth_certificate(osc, 1, &form, &CertGrid { radius: 6.0, count: 13 }, 1.1).map_err(e)?;
    ensure(good.pass, || format!("2zw̄+1 certificate failed: {good:?}"))?;
    let gauss = |z: &[Complex64], _: &[Complex64]| c(z[0].norm_sqr().exp(), 0.0);
    let bad = growth_certificate(gauss, 1, &form, &CertGrid { radius: 4.0, count: 9 }, 1.1).map_err(e)?;
    ensure(!bad.pass, || "e^{|z|²} sample passed".into())?;
    Ok(format!(
        "reproduction {worst:.1e}; e^(-|w|): C={:.3}, r={:.3}; 2zw̄+1 C={:.3}; e^{{|z|²}} refinement {:.2e}→{:.2e}",
        rep.constants["C"], rep.constants["r"], good.constants["C"], bad.refinement[0], bad.refinement[1]
    ))
}

fn detector() -> Outcome {
    let mut rng = seeded(700);
    let mut degrees = Vec::new();
    for k in 0..10 {
        let deg = rng.random_range(0..=8usize);
        let coeffs = random::poly_1d(&mut rng, deg);
        let f = |z: &[Complex64]| coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z[0] + a);
        let r = polynomial_detector(&f, 1, &DetectorOptions::new(8)).map_err(e)?;
        ensure(r.degree == Some(deg), || format!("#{k}: degree {:?}, expected {deg}", r.degree))?;
        for est in &r.coefficients {
            let n = est.index[0] as usize;
            let got = c(est.re, est.im);
            if n > deg {
                ensure(got.norm() < 1e-10, || format!("#{k}: c_{n} = {got}"))?;
            } else {
                ensure((got - coeffs[n]).norm() < 1e-10, || format!("#{k}: c_{n} = {got}, want {}", coeffs[n]))?;
            }
        }
        degrees.push(deg.to_string());
    }
    for cap in 0..=20 {
        let r = polynomial_detector(&|z: &[Complex64]| z[0].exp(), 1, &DetectorOptions::new(cap)).map_err(e)?;
        ensure(!r.polynomial, || format!("e^z accepted at cap {cap}"))?;
    }
    Ok(format!("degrees [{}] recovered; e^z rejected for caps 0..=20", degrees.join(",")))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("counterexample", counterexample, Some(Duration::from_secs(1))),
        ("harmonic oscillator", oscillator, Some(Duration::from_secs(1))),
        ("generator table", generators, None),
        ("round trip", round_trip, Some(Duration::from_secs(30))),
        ("twisted product dual path", twisted_dual_path, Some(Duration::from_secs(60))),
        ("product rule", product_rule, None),
        ("anti-Wick expansion", antiwick_expansion, None),
        ("diagonal law", diagonal_law, None),
        ("ellipticity transfer", ellipticity, None),
        ("anti-Wick positivity and Gårding", garding, Some(Duration::from_secs(120))),
        ("numerics", numerics, Some(Duration::from_secs(60))),
        ("bound checks", bound_checks, None),
        ("polynomial detector", detector, None),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = limit.filter(|l| took > *l);
        let (ok, detail) = match (&outcome, over) {
            (Ok(msg), None) => (true, msg.clone()),
            (Ok(msg), Some(l)) => (false, format!("{msg}; took {took:?}, limit {l:?}")),
            (Err(msg), _) => (false, msg.clone()),
        };
        failed += !ok as usize;
        println!("{} {:>2} {name}: {detail} [{:.2}s]", if ok { "PASS" } else { "FAIL" }, k + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
