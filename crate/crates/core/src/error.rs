use thiserror::Error;

/// Errors raised while validating inputs or evaluating the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid profile field `{field}`: {reason}")]
    InvalidProfile { field: &'static str, reason: String },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),
}

impl ModelError {
    pub(crate) fn profile(field: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidProfile {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn parameter(field: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// Name of the offending field, when there is one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            ModelError::InvalidProfile { field, .. } | ModelError::InvalidParameter { field, .. } => Some(field),
            ModelError::Domain(_) => None,
        }
    }
}
