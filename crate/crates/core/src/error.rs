use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The supremum defining the conjugate diverges (the bracket hit the cap).
    #[error("conjugate infinite at y = {y}")]
    ConjugateInfinite { y: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("resource limit exceeded: {what} needs {needed}, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("precondition failed: {0}")]
    PreconditionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
