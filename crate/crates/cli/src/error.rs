use std::path::PathBuf;

use matroid_xf_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("loop detected: {0}")]
    Loop(String),

    #[error("invalid MATROID_XF_CAPS: {0}")]
    Caps(String),

    #[error("{0}")]
    Limit(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Loop { element } => CliError::Loop(format!("element {element} has rank 0")),
            CoreError::InvalidInput(msg) => CliError::Validation(msg),
            CoreError::ResourceLimit { .. } => CliError::Limit(e.to_string()),
            CoreError::InternalConsistency(msg) => CliError::Internal(msg),
            other => CliError::Internal(other.to_string()),
        }
    }
}
