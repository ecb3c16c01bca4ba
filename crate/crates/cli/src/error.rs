//! CLI error type with the documented exit codes.
//!
//! Exit 0 on success, 2 on detection failure, 3 on I/O or file parse
//! errors, 4 on invalid configuration or arguments.

use crate::pnm::PnmError;
use hubtrack_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("detection failed: {0}")]
    Detection(CoreError),
    #[error(transparent)]
    Pnm(PnmError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Detection(_) => 2,
            CliError::Pnm(_) | CliError::Io { .. } => 3,
            CliError::Config(_) => 4,
        }
    }

    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoCircle { .. } | CoreError::NoMass => CliError::Detection(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<PnmError> for CliError {
    fn from(e: PnmError) -> Self {
        CliError::Pnm(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
