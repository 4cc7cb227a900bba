use std::path::{Path, PathBuf};

/// Failure to load one of the plain-text resource files (lexicons, tables).
#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{what}: line {line}: {message}")]
    Malformed {
        what: &'static str,
        line: usize,
        message: String,
    },
}

impl DataError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DataError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn malformed(what: &'static str, line: usize, message: impl Into<String>) -> Self {
        DataError::Malformed {
            what,
            line,
            message: message.into(),
        }
    }
}
