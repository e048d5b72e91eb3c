use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: u128,
        cap: u128,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("undecidable at desk scale: {0}")]
    Undecidable(String),
    #[error("sequence not proper: {0}")]
    NotProper(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("invalid input at {path}: {reason}")]
    Spec { path: String, reason: String },
}

impl Error {
    /// Process exit code: 1 computation error, 2 validation error, 3 cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::InvalidGroup(_)
            | Error::InvalidAction(_)
            | Error::InvalidModule(_)
            | Error::Spec { .. } => 2,
            _ => 1,
        }
    }
}
