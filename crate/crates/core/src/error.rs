//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("operator dimension must be at least 2 (got {0})")]
    DimTooSmall(usize),

    #[error("matrix is not Hermitian (max |A[i][j] - conj(A[j][i])| = {0:.3e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    InvalidDensity(String),

    #[error("local vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid tile layout: {0}")]
    InvalidLayout(String),

    #[error("rectangle out of grid bounds: {0}")]
    RectOutOfBounds(String),

    #[error("state construction fault: {0}")]
    ConstructionFault(String),

    #[error("degenerate trial state: tr[(rho2 - rho1)^2] = {0:.3e}")]
    DegenerateTrial(f64),

    #[error("numerical fault: {0}")]
    Numerical(String),

    #[error("decay fit rejected: {0}")]
    FitRejected(String),

    #[error("witness saturation violated: tr(W rho') = {0:.3e}")]
    SaturationViolated(f64),

    #[error("hyperplane distance undefined: traceless part has HS norm {0:.3e}")]
    HyperplaneUndefined(f64),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
