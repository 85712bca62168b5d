use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: empty or overlapping parts, out-of-range vertices,
    /// a size that a construction does not accept, and so on.
    #[error("{0}")]
    Validation(String),

    /// The operation is not defined for this uniformity.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A configured resource guard was hit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
