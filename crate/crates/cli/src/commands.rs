use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use fockcalc::fock::{ExactMatrix, FockPoly};
use fockcalc::numeric::antiwick_bound::{antiwick_bound_check, AwBoundOptions, AwEnvelope};
use fockcalc::numeric::bargmann::{assignment_via_stft, bargmann_coefficients, bargmann_quadrature, bargmann_via_stft, hermite_series};
use fockcalc::numeric::certificate::{growth_certificate, CertGrid, GrowthForm};
use fockcalc::numeric::detector::{polynomial_detector, DetectorOptions};
use fockcalc::numeric::garding::garding_experiment;
use fockcalc::numeric::quadrature::{HermiteRule, UniformGrid};
use fockcalc::numeric::WeightSpec;
use fockcalc::quantize::{berezin_diag, counterexample_symbol, kernel_eval, wick_quantize};
use fockcalc::random::seeded;
use fockcalc::symalg::serial::format_rational;
use fockcalc::symalg::{ExactCoeff, MultiIndex, SymbolRecord, WickSymbol};
use fockcalc::symmaps::{
    elliptic_check, hypoelliptic_diagnostic, principal_symbols, wick_to_antiwick_expansion, ExpansionResult,
    PrincipalPart, RadialGrid,
};
use fockcalc::twisted::{twisted_product, weyl_product};

use crate::config::{as_count, parse_list, Config};
use crate::input::{expect_kind, Input};
use crate::{Cli, CliError, Command, Common};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.common.config.as_deref())?;
    let c = &cli.common;
    let text = match &cli.command {
        Command::Quantize { sym, float } => quantize(&Input::read(sym)?, c.cutoff.unwrap_or(cfg.cutoff), *float)?,
        Command::ToWeyl { sym } => record(&Input::read(sym)?.to_weyl()?.to_record()),
        Command::ToWick { sym } => record(&Input::read(sym)?.to_wick()?.to_record()),
        Command::Compose { a, b, check_matrix } => compose(&Input::read(a)?, &Input::read(b)?, *check_matrix)?,
        Command::AwExpand { sym, order } => aw_expand(&Input::read(sym)?.to_wick()?, *order),
        Command::AwToWick { sym } => {
            let input = Input::read(sym)?;
            expect_kind(&input, "aw", "aw-to-wick")?;
            record(&input.to_wick()?.to_record())
        }
        Command::Berezin { sym } => record(&berezin_diag(&Input::read(sym)?.to_wick()?).to_record()),
        Command::Elliptic { sym, samples } => elliptic(&Input::read(sym)?, &cfg, c, *samples)?,
        Command::Hypo { sym, rho, rho0 } => hypo(&Input::read(sym)?, &cfg, c, *rho, *rho0)?,
        Command::Garding { sym, cutoffs } => garding(&Input::read(sym)?, &cfg, c, cutoffs.as_deref())?,
        Command::Counterexample => counterexample()?,
        Command::BargmannCheck { sym } => bargmann_check(sym.as_deref().map(Input::read).transpose()?, &cfg, c)?,
        Command::Certify { sym } => certify(&Input::read(sym)?, &cfg, c)?,
        Command::DetectPoly { sym, exp, dim, w0, raw, cap } => {
            let input = sym.as_deref().map(Input::read).transpose()?;
            detect_poly(input, *exp, *dim, w0.as_deref(), *raw, *cap, &cfg, c)?
        }
    };
    emit(c, &text)
}

fn emit(c: &Common, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Malformed(format!("cannot write output: {e}"));
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn record(rec: &SymbolRecord) -> String {
    rec.to_json() + "\n"
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize") + "\n"
}

fn index_label(alpha: &MultiIndex) -> String {
    alpha.entries().iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn quantize(input: &Input, cutoff: usize, float: bool) -> Result<String, CliError> {
    let m = wick_quantize(&input.to_wick()?).matrix(cutoff)?;
    if float {
        let mut buf = Vec::new();
        m.to_float().write_csv(&mut buf)?;
        return Ok(String::from_utf8(buf).expect("csv output is UTF-8"));
    }
    Ok(exact_csv(&m))
}

/// Nonzero entries in the monomial basis, exact, plus the orthonormal-basis value.
fn exact_csv(m: &ExactMatrix) -> String {
    let mut out = String::from("row,col,re,im,re_s2,im_s2,normalized_re,normalized_im\n");
    let b = m.basis();
    let mut entries: Vec<_> = m.entries().collect();
    entries.sort_by_key(|(r, c, _)| (*r, *c));
    for (r, c, v) in entries {
        let (p, q) = (v.rational_part(), v.sqrt2_part());
        let n = m.normalized_entry(r, c);
        out += &format!(
            "{},{},{},{},{},{},{:e},{:e}\n",
            index_label(b.index(r)),
            index_label(b.index(c)),
            format_rational(&p.re),
            format_rational(&p.im),
            format_rational(&q.re),
            format_rational(&q.im),
            n.re,
            n.im
        );
    }
    out
}

fn compose(a: &Input, b: &Input, check: Option<usize>) -> Result<String, CliError> {
    if let (Input::Weyl(x), Input::Weyl(y)) = (a, b) {
        if check.is_some() {
            return Err(CliError::Malformed("--check-matrix applies to Wick symbols".into()));
        }
        return Ok(record(&weyl_product(x, y)?.to_record()));
    }
    let (a, b) = (a.to_wick()?, b.to_wick()?);
    let p = twisted_product(&a, &b)?;
    if let Some(cutoff) = check {
        let band = a.degree().unwrap_or(0) + b.degree().unwrap_or(0);
        if cutoff < band {
            return Err(CliError::Precondition(format!("cutoff {cutoff} is below the band width {band}")));
        }
        let interior = cutoff - band;
        let lhs = wick_quantize(&p).matrix(cutoff)?;
        let rhs = wick_quantize(&a).matrix(cutoff)?.mul(&wick_quantize(&b).matrix(cutoff)?)?;
        let basis = lhs.basis().clone();
        let inner: Vec<usize> = (0..basis.len()).filter(|&k| basis.index(k).total() <= interior).collect();
        let equal = inner.iter().all(|&r| inner.iter().all(|&c| lhs.get(r, c) == rhs.get(r, c)));
        eprintln!("interior block |α| ≤ {interior} at cutoff {cutoff}: {}", if equal { "equal" } else { "DIFFERENT" });
        if !equal {
            return Err(CliError::CheckFailed("product matrix differs from the matrix product".into()));
        }
    }
    Ok(record(&p.to_record()))
}

fn aw_expand(a: &WickSymbol, order: Option<usize>) -> String {
    let ex = wick_to_antiwick_expansion(a, order.unwrap_or_else(|| a.degree_first()));
    let coefficients: Vec<_> = ex
        .coefficients
        .iter()
        .map(|(alpha, c)| {
            json!({
                "alpha": alpha.entries(),
                "weight": ExpansionResult::weight(alpha).to_string(),
                "symbol": c.to_record(),
            })
        })
        .collect();
    to_json(&json!({
        "order": ex.order,
        "coefficients": coefficients,
        "remainder": ex.remainder.to_record(),
        "remainder_is_zero": ex.remainder.is_zero(),
    }))
}

fn elliptic(input: &Input, cfg: &Config, c: &Common, samples: Option<usize>) -> Result<String, CliError> {
    let weyl = input.to_weyl()?;
    let (wp, ap) = principal_symbols(&weyl)?;
    let samples = samples.unwrap_or(cfg.tolerances.sphere_samples);
    let tol = c.tol.unwrap_or(cfg.tolerances.elliptic);
    let real = elliptic_check(PrincipalPart::Weyl(&wp), samples, tol)?;
    let wick = elliptic_check(PrincipalPart::WickDiagonal(&ap), samples, tol)?;
    let agree = real.is_elliptic() == wick.is_elliptic() && real.positive == wick.positive;
    Ok(to_json(&json!({
        "weyl_principal": wp.to_record(),
        "wick_principal": ap.to_record(),
        "weyl": real,
        "wick_diagonal": wick,
        "agree": agree,
    })))
}

fn radial_grid(c: &Common, cfg: &Config) -> Result<RadialGrid, CliError> {
    let Some(g) = &c.grid else { return Ok(cfg.grid.clone()) };
    match parse_list(g)?[..] {
        [r_min, r_max, radial, angular] => Ok(RadialGrid {
            r_min,
            r_max,
            radial: as_count(radial, "radial count")?,
            angular: as_count(angular, "angular count")?,
        }),
        _ => Err(CliError::Malformed(format!("--grid wants r_min,r_max,radial,angular, got {g:?}"))),
    }
}

fn cert_grid(c: &Common, default: CertGrid) -> Result<CertGrid, CliError> {
    let Some(g) = &c.grid else { return Ok(default) };
    match parse_list(g)?[..] {
        [radius, count] => Ok(CertGrid { radius, count: as_count(count, "grid count")? }),
        _ => Err(CliError::Malformed(format!("--grid wants radius,count, got {g:?}"))),
    }
}

fn hypo(input: &Input, cfg: &Config, c: &Common, rho: Option<f64>, rho0: Option<f64>) -> Result<String, CliError> {
    let mut params = cfg.hypo.clone();
    params.rho = rho.unwrap_or(params.rho);
    params.rho0 = rho0.unwrap_or(params.rho0);
    params.tol = c.tol.unwrap_or(params.tol);
    let report = hypoelliptic_diagnostic(&input.to_wick()?, &params, &radial_grid(c, cfg)?)?;
    Ok(to_json(&report))
}

fn garding(input: &Input, cfg: &Config, c: &Common, cutoffs: Option<&str>) -> Result<String, CliError> {
    let cutoffs = match cutoffs {
        Some(s) => parse_list(s)?.into_iter().map(|v| as_count(v, "cutoff")).collect::<Result<Vec<_>, _>>()?,
        None => cfg.cutoffs.clone(),
    };
    let mut tol = cfg.tolerances.clone();
    tol.eigen = c.tol.unwrap_or(tol.eigen);
    let report = garding_experiment(&input.to_wick()?, &cutoffs, &radial_grid(c, cfg)?, &tol)?;
    eprintln!(
        "diagonal min {:e}; spread λ {:e}, skew {:e}; {}",
        report.diagonal_min,
        report.lambda_spread,
        report.skew_spread,
        if report.pass { "stable" } else { "not stable" }
    );
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn counterexample() -> Result<String, CliError> {
    let a = counterexample_symbol();
    let diag = berezin_diag(&a);
    let f = FockPoly::monomial(MultiIndex::from([1]), ExactCoeff::one());
    let form = wick_quantize(&a).apply(&f)?.inner(&f);
    Ok(format!(
        "symbol      a(z, w) = {a}\ndiagonal    a(w, w) = {diag} = (1 − |w|²)² + |w|⁴\nform        <Op(a) z, z> = {form}\n"
    ))
}

fn random_point(rng: &mut impl Rng, d: usize, radius: f64) -> Vec<Complex64> {
    // uniform in the polydisc of the given radius
    (0..d)
        .map(|_| Complex64::from_polar(radius * rng.random::<f64>().sqrt(), std::f64::consts::TAU * rng.random::<f64>()))
        .collect()
}

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

fn bargmann_check(sym: Option<Input>, cfg: &Config, c: &Common) -> Result<String, CliError> {
    let bc = &cfg.bargmann;
    let mut rng = seeded(c.seed);
    let series: Vec<(MultiIndex, Complex64)> = (0..bc.terms)
        .map(|_| {
            let n = rng.random_range(0..=bc.max_order);
            (MultiIndex::from([n]), Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        })
        .collect();
    let f = hermite_series(&series);
    let rule = HermiteRule::new(cfg.tolerances.gh_nodes)?;
    let stft_grid = UniformGrid { half_width: bc.stft_half_width, points: bc.stft_points };
    let (mut quad_err, mut stft_err) = (0.0f64, 0.0f64);
    for _ in 0..bc.points {
        let z = random_point(&mut rng, 1, bc.radius);
        let exact = bargmann_coefficients(&series, &z)?;
        quad_err = quad_err.max(rel_err(bargmann_quadrature(|y: &[f64]| f(y), &z, &rule), exact));
        stft_err = stft_err.max(rel_err(bargmann_via_stft(&f, &z, &stft_grid)?, exact));
    }
    let tol = c.tol.unwrap_or(cfg.tolerances.quadrature);
    let mut pass = quad_err <= tol && stft_err <= bc.stft_tol;
    let mut out = json!({
        "seed": c.seed,
        "series": series.iter().map(|(a, v)| json!({"alpha": a.entries(), "re": v.re, "im": v.im})).collect::<Vec<_>>(),
        "points": bc.points,
        "quadrature_error": quad_err,
        "stft_error": stft_err,
    });
    if let Some(input) = sym {
        expect_kind(&input, "weyl", "bargmann-check --sym")?;
        let Input::Weyl(w) = &input else { unreachable!() };
        let wick = input.to_wick()?;
        let grid = UniformGrid { half_width: bc.assignment_half_width, points: bc.assignment_points };
        let d = w.dim();
        let mut err = 0.0f64;
        for _ in 0..bc.points {
            let z = random_point(&mut rng, d, bc.assignment_radius);
            let v = random_point(&mut rng, d, bc.assignment_radius);
            err = err.max(rel_err(assignment_via_stft(w, &z, &v, &grid)?, wick.eval(&z, &v)?));
        }
        pass &= err <= bc.stft_tol;
        out["assignment_error"] = json!(err);
    }
    out["pass"] = json!(pass);
    Ok(to_json(&out))
}

fn certify(input: &Input, cfg: &Config, c: &Common) -> Result<String, CliError> {
    if let Input::AntiWick(a0) = input {
        let deg = a0.degree().unwrap_or(0) as f64;
        let opts = AwBoundOptions {
            grid: cert_grid(c, cfg.antiwick.grid)?,
            quadrature: cfg.antiwick.quadrature,
            envelope: cfg.antiwick.envelope.clone().unwrap_or(AwEnvelope::Weighted { weight: WeightSpec::Polynomial { s: deg } }),
            stability_ratio: cfg.tolerances.stability_ratio,
            quadrature_tol: Some(c.tol.unwrap_or(cfg.tolerances.quadrature)),
        };
        let f = |w: &[Complex64]| a0.eval(w).expect("dimension checked by the grid");
        return Ok(to_json(&antiwick_bound_check(&f, a0.dim(), &opts)?));
    }
    let a = input.to_wick()?;
    let form = cfg.growth.clone().unwrap_or(GrowthForm::ShubinBargmann {
        weight: WeightSpec::Polynomial { s: a.degree().unwrap_or(0) as f64 },
        n: 2.0,
    });
    let eval = |z: &[Complex64], w: &[Complex64]| a.eval(z, w).expect("dimension checked by the grid");
    let report = growth_certificate(eval, a.dim(), &form, &cert_grid(c, cfg.cert_grid)?, cfg.tolerances.stability_ratio)?;
    Ok(to_json(&report))
}

#[allow(clippy::too_many_arguments)]
fn detect_poly(
    input: Option<Input>,
    exp: bool,
    dim: usize,
    w0: Option<&str>,
    raw: bool,
    cap: Option<usize>,
    cfg: &Config,
    c: &Common,
) -> Result<String, CliError> {
    let dc = &cfg.detector;
    let mut opts = DetectorOptions::new(cap.unwrap_or(dc.degree_cap));
    opts.radii = match &c.grid {
        Some(g) => parse_list(g)?,
        None => dc.radii.clone(),
    };
    opts.samples = dc.samples;
    opts.tol = c.tol.unwrap_or(cfg.tolerances.detector);
    let report = if exp {
        if dim == 0 {
            return Err(CliError::Malformed("--dim must be positive".into()));
        }
        polynomial_detector(&|z: &[Complex64]| z[0].exp(), dim, &opts)?
    } else {
        let a = input.expect("clap requires --sym without --exp").to_wick()?;
        let d = a.dim();
        let w0: Vec<Complex64> = match w0 {
            Some(s) => match parse_list(s)?.chunks(2).map(|p| p.to_vec()).collect::<Vec<_>>() {
                pairs if pairs.len() == d && pairs.iter().all(|p| p.len() == 2) => {
                    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
                }
                _ => return Err(CliError::Malformed(format!("--w0 needs {d} re,im pairs, got {s:?}"))),
            },
            None => match &dc.w0 {
                Some(v) if v.len() == d => v.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
                Some(v) => return Err(CliError::Malformed(format!("w0 has {} coordinates, symbol has {d}", v.len()))),
                None => vec![Complex64::new(0.5, -0.25); d],
            },
        };
        let f = |z: &[Complex64]| -> Complex64 {
            let k = kernel_eval(&a, z, &w0).expect("dimension matches").value;
            if raw {
                k
            } else {
                let expo: Complex64 = z.iter().zip(&w0).map(|(zj, wj)| zj * wj.conj()).sum();
                k / expo.exp()
            }
        };
        polynomial_detector(&f, d, &opts)?
    };
    Ok(to_json(&report))
}
