use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("local dimension d must be at least 1")]
    ZeroDimension,

    #[error("number of reference copies N must be at least 1")]
    ZeroCopies,

    #[error("{what} dimension {dim} exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (max asymmetry {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("eigenvalue {value} matches no predicted spectral block")]
    UnassignedEigenvalue { value: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}
