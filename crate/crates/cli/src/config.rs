//! Run configuration: one TOML file, every field optional, flags win.

use serde::{Deserialize, Serialize};

use fockcalc::numeric::antiwick_bound::{AwEnvelope, AwQuadrature};
use fockcalc::numeric::certificate::{CertGrid, GrowthForm};
use fockcalc::numeric::{Tolerances, WeightSpec};
use fockcalc::symmaps::{HypoParams, RadialGrid};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerances: Tolerances,
    /// Truncation degree for `quantize` and `compose --check-matrix`.
    pub cutoff: usize,
    /// Cutoff ladder of the Gårding experiment.
    pub cutoffs: Vec<usize>,
    /// Shell grid for diagonal positivity and hypoellipticity.
    pub grid: RadialGrid,
    /// Cube grid for growth certificates.
    pub cert_grid: CertGrid,
    /// Growth form for `certify` on Wick symbols; by default `⟨z⟩^{deg}` with N = 2.
    pub growth: Option<GrowthForm>,
    pub antiwick: AntiWickConfig,
    pub hypo: HypoParams,
    pub detector: DetectorConfig,
    pub bargmann: BargmannConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntiWickConfig {
    /// Cube for `certify` on anti-Wick symbols; the sample count grows like count^{4d}.
    pub grid: CertGrid,
    pub quadrature: AwQuadrature,
    /// Defaults to `⟨z + w⟩^{deg}` when absent.
    pub envelope: Option<AwEnvelope>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub degree_cap: usize,
    pub radii: Vec<f64>,
    pub samples: Option<usize>,
    /// Second argument `w₀` at which the kernel is probed, one `[re, im]` per coordinate.
    pub w0: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BargmannConfig {
    pub terms: usize,
    pub max_order: u32,
    pub points: usize,
    pub radius: f64,
    pub stft_half_width: f64,
    pub stft_points: usize,
    /// Bound for the STFT and assignment paths.
    pub stft_tol: f64,
    pub assignment_radius: f64,
    pub assignment_half_width: f64,
    pub assignment_points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            cutoff: 16,
            cutoffs: vec![8, 16, 24, 32],
            grid: RadialGrid::default(),
            cert_grid: CertGrid::default(),
            growth: None,
            antiwick: AntiWickConfig::default(),
            hypo: HypoParams { rho: 1.0, rho0: 0.0, weight: WeightSpec::Polynomial { s: 2.0 }, order: 2, tol: 1e-9 },
            detector: DetectorConfig::default(),
            bargmann: BargmannConfig::default(),
        }
    }
}

impl Default for AntiWickConfig {
    fn default() -> Self {
        Self { grid: CertGrid { radius: 2.0, count: 5 }, quadrature: AwQuadrature::GaussHermite { nodes: 64 }, envelope: None }
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self { degree_cap: 8, radii: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0], samples: None, w0: None }
    }
}

impl Default for BargmannConfig {
    fn default() -> Self {
        Self {
            terms: 6,
            max_order: 5,
            points: 25,
            radius: 2.0,
            stft_half_width: 12.0,
            stft_points: 384,
            stft_tol: 1e-6,
            assignment_radius: 1.0,
            assignment_half_width: 8.0,
            assignment_points: 160,
        }
    }
}

impl Config {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
    }
}

/// Comma-separated numbers, as taken by `--grid`, `--cutoffs` and `--w0`.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Malformed(format!("not a number: {t:?} in {s:?}"))))
        .collect()
}

pub fn as_count(v: f64, what: &str) -> Result<usize, CliError> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1e9 {
        Ok(v as usize)
    } else {
        Err(CliError::Malformed(format!("{what} must be a nonnegative integer, got {v}")))
    }
}
