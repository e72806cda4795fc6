use serde::{Deserialize, Serialize};

/// Every numeric tolerance in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Quadrature agreement and refinement checks.
    pub quadrature: f64,
    pub eigen: f64,
    pub eigen_max_iter: usize,
    /// Certificates pass when the fitted constant changes by less than this ratio.
    pub stability_ratio: f64,
    /// Gauss–Hermite nodes per real axis.
    pub gh_nodes: usize,
    pub sphere_samples: usize,
    /// Relative threshold for "nonzero on the sphere".
    pub elliptic: f64,
    /// Coefficients below this count as zero in the polynomial detector.
    pub detector: f64,
    /// Allowed relative spread of the last three cutoffs in the Gårding experiment.
    pub garding_spread: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: 1e-8,
            eigen: 1e-10,
            eigen_max_iter: 10_000,
            stability_ratio: 1.1,
            gh_nodes: 64,
            sphere_samples: 4096,
            elliptic: 1e-9,
            detector: 1e-10,
            garding_spread: 0.05,
        }
    }
}
