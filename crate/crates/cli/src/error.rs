//! CLI error type with the stable exit-code contract:
//! 0 ok, 1 parse error, 2 hypothesis violation, 3 outside classified families.

use thiserror::Error;

use fermat_core::{FermatError, SolverError};

#[derive(Debug, Clone, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Outside(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Outside(_) => 3,
        }
    }
}

impl From<FermatError> for CliError {
    fn from(e: FermatError) -> Self {
        match e {
            FermatError::HypothesisViolated(v) => CliError::Hypothesis(
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Fermat(inner) => inner.into(),
            SolverError::OutsideFamilies(reason) => CliError::Outside(reason.to_string()),
            SolverError::NoCase4Family(msg) => CliError::Outside(format!("no case-4 family: {msg}")),
            other => CliError::Parse(other.to_string()),
        }
    }
}
