//! Transforms between Weyl, Wick and anti-Wick symbols, and ellipticity diagnostics.

pub mod diagnostics;
pub mod transforms;

pub use diagnostics::{
    elliptic_check, hypoelliptic_diagnostic, sphere_points, EllipticityKind, EllipticityReport, HypoParams,
    PrincipalPart, RadialGrid,
};
pub use transforms::{
    antiwick_to_wick, diag_difference, principal_symbols, weyl_to_wick, wick_diagonal_real, wick_to_antiwick_expansion,
    wick_to_weyl, DiagDifference, ExpansionResult,
};
