use thiserror::Error;

/// Failures reported by the displacement, state and measure routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimension {0} is invalid, every qudit needs d >= 2")]
    InvalidDimension(usize),

    #[error("register must contain at least one qudit")]
    EmptyRegister,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("dense budget exceeded: {what} needs dimension {required}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unitary is not Clifford: no displacement matches the image of {0}")]
    NotClifford(String),

    #[error("generator {0} failed Clifford certification")]
    CertificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
