use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular map: reciprocal condition number {rcond:.3e} below threshold")]
    SingularMap { rcond: f64 },

    #[error("Choi matrix is not Hermitian (deviation {deviation:.3e}); map does not preserve Hermiticity")]
    NonHermitianChoi { deviation: f64 },

    #[error("time {t} outside the tabulated range [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),

    #[error("Laplace quadrature did not converge: tail bound {tail_bound:.3e}")]
    Quadrature { tail_bound: f64 },

    #[error("Laplace inversion failed: {0}")]
    Inversion(String),

    #[error("series validity precondition violated: worst ratio {worst:.6} >= 1")]
    ValidityViolated { worst: f64 },

    #[error("extrapolation did not converge (error estimate {estimate:.3e})")]
    Extrapolation { estimate: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
