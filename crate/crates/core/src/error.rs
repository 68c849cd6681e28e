use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of the operation (bad sector, size mismatch, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Non-finite values or a failed linear-algebra kernel.
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(err: ndarray_linalg::error::LinalgError) -> Self {
        Error::Numeric(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
