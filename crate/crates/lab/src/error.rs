use std::path::PathBuf;

use ghostlab_core::dynamics::DynamicsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("missing key `{0}` in config")]
    MissingKey(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl LabError {
    /// 2 for configuration and IO problems, 3 for numeric failures, 4 for failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::MissingKey(_) | LabError::Config(_) | LabError::Io { .. } => 2,
            LabError::Numeric(_) => 3,
            LabError::Verification(_) => 4,
        }
    }

    pub fn config(msg: impl std::fmt::Display) -> Self {
        LabError::Config(msg.to_string())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Parameter problems are config errors; everything that happens while integrating is numeric.
impl From<DynamicsError> for LabError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::LambdaNotInShells { .. }
            | DynamicsError::EmptyShell { .. }
            | DynamicsError::ForceOffShell { .. }
            | DynamicsError::ZeroForce
            | DynamicsError::SupportViolation { .. }
            | DynamicsError::TruncationViolation { .. }
            | DynamicsError::InvalidParameter { .. } => LabError::Config(e.to_string()),
            DynamicsError::NonFinite { .. }
            | DynamicsError::BlowUp { .. }
            | DynamicsError::DegenerateDiagnostics { .. }
            | DynamicsError::TooFewSamples { .. } => LabError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
