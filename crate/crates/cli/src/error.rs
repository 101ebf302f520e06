use stci_core::{EquationError, SemigroupError};
use thiserror::Error;

/// Failures mapped onto the stable exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoDecomposition(String),
    #[error("{0}")]
    NotPolynomial(String),
    #[error("verification failed for {0}")]
    VerificationFailed(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoDecomposition(_) => 3,
            CliError::NotPolynomial(_) => 4,
            CliError::VerificationFailed(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::NoAdmissibleDecomposition { .. } => {
                CliError::NoDecomposition(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EquationError> for CliError {
    fn from(e: EquationError) -> Self {
        match &e {
            EquationError::Selection {
                source: SemigroupError::NoAdmissibleDecomposition { .. },
                ..
            } => CliError::NoDecomposition(e.to_string()),
            EquationError::NotPolynomial { .. } | EquationError::SpliceNotPolynomial { .. } => {
                CliError::NotPolynomial(e.to_string())
            }
            EquationError::Selection { .. } | EquationError::InvalidSplice(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}
