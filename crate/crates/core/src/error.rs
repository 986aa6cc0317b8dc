use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: {left} decisions vs {right} truth indicators")]
    LengthMismatch { left: usize, right: usize },

    /// Counts that make an estimator undefined (empty tail window, equal window bounds).
    #[error("degenerate estimate: {0}")]
    Degenerate(String),

    /// A simulation cell whose parameters leave the asymptotic framework.
    #[error("cell {cell}: {reason}")]
    Cell { cell: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
