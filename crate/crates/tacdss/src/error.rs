use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model document: parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model document: unsupported format_version {0}")]
    UnsupportedVersion(u32),
    #[error("model document: {0}")]
    InvalidModel(#[source] tacdss_core::Error),
    #[error("dataset row {row}: {message}")]
    Dataset { row: usize, message: String },
    #[error("dataset: {0}")]
    DatasetHeader(String),
    #[error(transparent)]
    Core(#[from] tacdss_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
