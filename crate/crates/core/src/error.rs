use thiserror::Error;

/// Errors produced by the library.
///
/// `Validation` and `Contour` are precondition violations (bad inputs,
/// reconstruction target outside the measured contour). `Capacity` means the
/// request is structurally fine but exceeds the configured size or memory
/// budget of the chosen algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("contour violation: {0}")]
    Contour(String),
    #[error("capacity: {0}")]
    Capacity(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn contour(msg: impl Into<String>) -> Self {
        Error::Contour(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    /// True for errors that indicate invalid caller input rather than an
    /// exceeded resource budget.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Contour(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
