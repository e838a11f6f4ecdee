use std::io;

use diffuse_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot parse target: {0}")]
    Target(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 0 success, 2 validation, 3 insufficient density, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::InsufficientDensity { .. } | CoreError::EmptyNet(_)) => 3,
            CliError::Core(CoreError::Io(_)) | CliError::Io { .. } => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
