use std::path::PathBuf;

use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unknown parameters or malformed specs. Exit code 2.
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] orliczlab_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(orliczlab_core::Error::Parse { .. }) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use orliczlab_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Core(e) => match e {
                E::Validation(_) => "validation",
                E::Precondition(_) => "precondition",
                E::Domain(_) => "domain",
                E::Numerical(_) => "numerical",
                E::Construction { .. } => "construction",
                E::Depth { .. } => "depth",
                E::Parse { .. } => "parse",
                E::Unsupported(_) => "unsupported",
            },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}
