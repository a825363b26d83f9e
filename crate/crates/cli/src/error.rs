use orlicz_core::Error as CoreError;
use thiserror::Error;

/// Failure classes with their process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) | CoreError::PreconditionFailure(_) => {
                CliError::Config(e.to_string())
            }
            CoreError::ResourceLimit { .. } => CliError::Budget(e.to_string()),
            CoreError::ConjugateInfinite { .. } | CoreError::NumericalFailure(_) => {
                CliError::Invariant(e.to_string())
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
