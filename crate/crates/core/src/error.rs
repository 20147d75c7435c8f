use std::path::PathBuf;

/// Errors produced by network construction, coefficient reduction, pruning and I/O.
#[derive(Debug, thiserror::Error)]
pub enum ChampError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("degenerate network: {0}")]
    Degenerate(String),

    #[error("length mismatch: expected {expected} labels, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("undefined adjustment: {0}")]
    Undefined(String),

    #[error("parse error in {source_name} at line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ChampError>;

impl ChampError {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        ChampError::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ChampError::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn validation(msg: impl Into<String>) -> ChampError {
    ChampError::validation(msg)
}
