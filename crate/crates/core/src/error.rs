use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cutoff n_max = {n_max} too small for |alpha|^2 = {alpha_sq}")]
    CutoffTooSmall { n_max: usize, alpha_sq: f64 },

    #[error("degenerate state: norm {norm:e} is below 1e-14")]
    Degenerate { norm: f64 },

    #[error("operator is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NonHermitian { deviation: f64 },

    #[error("alpha = {re} + {im}i is complex; only real alpha is supported")]
    ComplexAlpha { re: f64, im: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("initial state has weight {weight:e} outside span{{psi+, psi-}}")]
    OutsideEigenspan { weight: f64 },

    #[error("amplitude file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
