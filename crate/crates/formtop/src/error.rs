use std::path::PathBuf;

use thiserror::Error;

/// Anything wrong with user input. Maps to exit code 3.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}:{line}: {message}")]
    Located { path: String, line: usize, message: String },
    #[error("invalid {kind} `{input}`: {message}")]
    Spec {
        kind: &'static str,
        input: String,
        message: String,
    },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl InputError {
    pub fn spec(kind: &'static str, input: &str, message: impl Into<String>) -> Self {
        InputError::Spec {
            kind,
            input: input.to_string(),
            message: message.into(),
        }
    }

    pub fn located(path: &str, line: usize, message: impl Into<String>) -> Self {
        InputError::Located {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })
}
