//! Lower bounds of truncated quadratic forms as the cutoff grows.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Tolerances;
use crate::error::{Error, Result};
use crate::fock::{eigenvalues_sym, min_eig_sym, FloatMatrix};
use crate::numeric::weight::japanese;
use crate::quantize::{berezin_diag, wick_quantize};
use crate::symmaps::{sphere_points, RadialGrid};
use crate::symalg::WickSymbol;

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GardingRow {
    pub cutoff: usize,
    pub lambda_min: f64,
    pub skew_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GardingReport {
    pub rows: Vec<GardingRow>,
    /// `max − min` of `λ_min` over the last three cutoffs.
    pub lambda_spread: f64,
    pub skew_spread: f64,
    /// Smallest Berezin diagonal value seen on the precondition grid.
    pub diagonal_min: f64,
    pub pass: bool,
}

impl GardingReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Internal(format!("csv: {e}")))?;
        }
        w.flush().map_err(|e| Error::Internal(e.to_string()))?;
        Ok(())
    }
}

/// Spectral norm of a skew-adjoint matrix, via the self-adjoint `−iS`.
pub fn skew_norm(s: &FloatMatrix, tol: &Tolerances) -> Result<f64> {
    let h = FloatMatrix::new(s.basis().clone(), s.data() * Complex64::new(0.0, -1.0))?;
    let ev = eigenvalues_sym(&h, tol.eigen, tol.eigen_max_iter)?;
    Ok(ev.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Minimum of `Re a(w, w) / (‖a‖₁ ⟨w⟩^{deg})` over the origin and a radial grid,
/// rejecting non-real diagonals. Only its sign is meaningful across symbols.
pub fn diagonal_minimum(a: &WickSymbol, grid: &RadialGrid) -> Result<f64> {
    if grid.radial == 0 || grid.angular == 0 {
        return Err(Error::EmptyGrid);
    }
    let d = a.dim();
    let diag = berezin_diag(a);
    let dirs = sphere_points(2 * d, grid.angular);
    let mut radii = vec![0.0];
    radii.extend(grid.radii());
    let scale = a.coeff_l1().max(1.0);
    let mut min = f64::INFINITY;
    for r in radii {
        for dir in &dirs {
            let w: Vec<Complex64> = (0..d).map(|j| Complex64::new(r * dir[j], r * dir[d + j])).collect();
            let v = diag.eval(&w)?;
            let size = scale * japanese(&w).powi(diag.degree().unwrap_or(0) as i32);
            if v.im.abs() > 1e-9 * size {
                return Err(Error::Precondition(format!("diagonal symbol is not real at {w:?}")));
            }
            min = min.min(v.re / size);
        }
    }
    Ok(min)
}

fn spread(vals: &[f64]) -> f64 {
    let tail = &vals[vals.len().saturating_sub(3)..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn stable(vals: &[f64], rel: f64) -> bool {
    let tail = &vals[vals.len().saturating_sub(3)..];
    let scale = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    spread(vals) <= rel * scale + 1e-9
}

/// `λ_min` of the self-adjoint part and the norm of the skew part of the
/// truncated operator at each cutoff. Requires `a(w, w) ≥ 0`.
pub fn garding_experiment(a: &WickSymbol, cutoffs: &[usize], grid: &RadialGrid, tol: &Tolerances) -> Result<GardingReport> {
    if cutoffs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let diagonal_min = diagonal_minimum(a, grid)?;
    if diagonal_min < -tol.quadrature {
        return Err(Error::Precondition(format!("Berezin diagonal takes negative values (min {diagonal_min:e})")));
    }
    let op = wick_quantize(a);
    let rows = cutoffs
        .par_iter()
        .map(|&cutoff| {
            let m = op.matrix(cutoff)?.to_float();
            let (h, s) = m.hermitian_split();
            Ok(GardingRow { cutoff, lambda_min: min_eig_sym(&h, tol.eigen, tol.eigen_max_iter)?, skew_norm: skew_norm(&s, tol)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda_min).collect();
    let skews: Vec<f64> = rows.iter().map(|r| r.skew_norm).collect();
    let pass = stable(&lambdas, tol.garding_spread) && stable(&skews, tol.garding_spread);
    Ok(GardingReport { lambda_spread: spread(&lambdas), skew_spread: spread(&skews), rows, diagonal_min, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::counterexample_symbol;
    use crate::symalg::{ExactCoeff, Monomial};

    #[test]
    fn number_operator_is_nonnegative() {
        let a = WickSymbol::zw(1, [1], [1], ExactCoeff::from_int(2));
        let r = garding_experiment(&a, &[8, 16, 24, 32], &RadialGrid::default(), &Tolerances::default()).unwrap();
        assert!(r.pass);
        assert!(r.rows.iter().all(|row| row.lambda_min.abs() < 1e-12 && row.skew_norm == 0.0));
    }

    #[test]
    fn perturbed_family_is_stable() {
        let mut a = WickSymbol::zw(1, [1], [1], ExactCoeff::one());
        let eps = ExactCoeff::from_ratio(1, 4);
        a.add_term(Monomial::new([2], [0]), &eps);
        a.add_term(Monomial::new([0], [2]), &eps);
        let r = garding_experiment(&a, &[8, 16, 24, 32], &RadialGrid::default(), &Tolerances::default()).unwrap();
        assert!(r.pass, "{r:?}");
        let ground = ((1.0f64 - 4.0 * 0.0625).sqrt() - 1.0) / 2.0;
        assert!((r.rows[3].lambda_min - ground).abs() < 1e-6, "{}", r.rows[3].lambda_min);
    }

    #[test]
    fn negative_diagonal_is_a_precondition_error() {
        let a = WickSymbol::zw(1, [1], [1], ExactCoeff::from_int(-1));
        let e = garding_experiment(&a, &[4], &RadialGrid::default(), &Tolerances::default());
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn counterexample_has_positive_diagonal_and_negative_form() {
        let r = garding_experiment(&counterexample_symbol(), &[1, 2, 3], &RadialGrid::default(), &Tolerances::default()).unwrap();
        assert!(r.diagonal_min > 0.0);
        assert!(r.rows.iter().all(|row| row.lambda_min == -1.0));
    }

    #[test]
    fn trace_csv_columns() {
        let a = WickSymbol::zw(1, [1], [1], ExactCoeff::one());
        let r = garding_experiment(&a, &[2], &RadialGrid::default(), &Tolerances::default()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("cutoff,lambda_min,skew_norm\n"));
    }
}
