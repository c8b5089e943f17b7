use std::io;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] nodal_core::Error),
    #[error("cannot access {}: {source}", path.display())]
    IoFailure { path: PathBuf, source: io::Error },
    #[error("malformed ensemble: {0}")]
    Format(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LabError::IoFailure {
            path: path.into(),
            source,
        }
    }
}
