use thiserror::Error;

/// Errors surfaced by the library. Contract violations indicate a caller
/// handing in data that breaks a documented precondition (e.g. a vertex set
/// that is not downward closed), not internal bugs.
#[derive(Debug, Error)]
pub enum ScarError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported model for this operation: {0}")]
    UnsupportedModel(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, ScarError>;

impl ScarError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ScarError::InvalidArgument(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        ScarError::UnsupportedModel(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        ScarError::ResourceLimit(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        ScarError::ContractViolation(msg.into())
    }
}
