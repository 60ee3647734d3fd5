use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("state vector not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("game is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("game is not zero-sum: {0}")]
    NotZeroSum(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state on simplex boundary; logarithm undefined at component {index}")]
    Boundary { index: usize },

    #[error("integration unstable at step {step}: {reason}")]
    Unstable { step: usize, reason: String },
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for numerical-instability aborts, as opposed to bad input.
    pub fn is_instability(&self) -> bool {
        matches!(self, Error::Unstable { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
