use crate::abgroup::AbError;
use crate::scenario::ScenarioError;

/// Crate-level error with the exit-code classification used by the binary.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Group(#[from] AbError),
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("size cap exceeded: {what} is {actual}, cap is {cap}; {hint}")]
    Cap { what: String, actual: u64, cap: u64, hint: String },
    #[error("input error: {0}")]
    Input(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// 2 for input or validation problems, 3 for resource caps, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Scenario(_) | Error::Group(_) | Error::Dimension { .. } | Error::Input(_) => 2,
            Error::Cap { .. } => 3,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
