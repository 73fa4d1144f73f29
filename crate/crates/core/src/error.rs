use thiserror::Error;

/// Errors raised by state validation, measurement application and the optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscordError {
    #[error("matrix is not Hermitian (max entrywise deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    NonUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("imaginary residue {residue:.3e} in a quantity that must be real")]
    NumericalResidue { residue: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("matrix is not unitary (max deviation of U^dagger U from I is {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("optimizer failure: {0}")]
    OptimizerFailure(String),

    #[error("malformed state document: {0}")]
    Format(String),
}

impl DiscordError {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        DiscordError::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, DiscordError>;
