use thiserror::Error;

/// Errors surfaced by the library: bad input data or an unmet operation
/// precondition. Internal consistency violations (for example a curvature
/// tensor losing its Hermitian pair symmetry) panic instead, since they
/// indicate an implementation bug rather than bad data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code mandated by the CLI contract (input errors are 2).
    pub fn exit_code(&self) -> i32 {
        2
    }
}
