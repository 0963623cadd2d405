use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// CSV header did not match `lon,lat,val`.
    #[error("schema error: expected header `lon,lat,val`, found `{found}`")]
    Schema { found: String },

    /// A data row could not be decoded.
    #[error("row {row}: {message}")]
    Row { row: u64, message: String },

    /// A decoded value violates a type invariant.
    #[error("validation error at row {row}: {message}")]
    Validation { row: u64, message: String },

    /// A sample of the wrong measurement kind was supplied.
    #[error("kind error: {0}")]
    Kind(String),

    /// Malformed binary IQ capture.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    /// Slot/burst structure could not be detected.
    #[error("detection error: {0}")]
    Detection(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
