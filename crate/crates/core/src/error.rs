use thiserror::Error;

/// Errors shared by every analysis module.
///
/// `Input` covers malformed or inconsistent data (bad JSON, schema
/// violations, unknown identifiers, invalid specs). `Limit` is raised when a
/// computation would exceed the configured size caps. `Precondition` reports
/// a violated operation precondition, naming the identity or condition that
/// failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code for the CLI: 1 for invalid input, 2 for a blown cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Precondition(_) => 1,
            Error::Limit(_) => 2,
        }
    }
}
