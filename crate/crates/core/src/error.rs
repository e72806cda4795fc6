use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("substitution matrix has shape {rows}x{cols}, expected {expected}x{expected}")]
    ShapeMismatch { rows: usize, cols: usize, expected: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("symbol is not homogeneous (degrees {min}..={max})")]
    NotHomogeneous { min: usize, max: usize },

    #[error("zero polynomial has no principal part")]
    ZeroPolynomial,

    #[error("matrix is not self-adjoint (deviation {deviation:e} > {tol:e})")]
    NotSelfAdjoint { deviation: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
