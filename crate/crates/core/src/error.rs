use thiserror::Error;

/// Errors raised by the group kernel, target machinery and solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or mismatched input (wrong family, bad word, bad table...).
    #[error("input error: {0}")]
    Input(String),
    /// The requested operation is not available for this family or
    /// representation.
    #[error("unsupported: {0}")]
    Capability(String),
    /// A size or step limit was hit before the computation finished.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An exponent left the machine range.
    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}
