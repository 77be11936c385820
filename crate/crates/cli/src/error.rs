//! Error type and machine-readable error report.

use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("invalid parameter: {0}")]
    Validation(String),
    #[error("config file {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Module {
        context: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Module { .. } => "module",
        }
    }

    /// Exit status: 2 for bad input, 1 for failures while computing or writing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) | CliError::Config { .. } => 2,
            CliError::Io { .. } | CliError::Module { .. } => 1,
        }
    }

    /// One-line JSON report for standard error.
    pub fn report(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

pub fn invalid(message: impl Into<String>) -> CliError {
    CliError::Validation(message.into())
}

/// Attaches a context string to errors raised by the library.
pub trait Context<T> {
    fn context(self, context: &str) -> Result<T, CliError>;
}

impl<T, E> Context<T> for Result<T, E>
where
    E: std::error::Error + Send + Sync + 'static,
{
    fn context(self, context: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::Module {
            context: context.to_string(),
            source: Box::new(e),
        })
    }
}
