use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the harness, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("training error: {0}")]
    Training(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<LabError>,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Data(_) => 3,
            LabError::Training(_) => 4,
            LabError::Verification(_) => 5,
            LabError::Io { .. } => 6,
            LabError::Run { source, .. } => source.exit_code(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_run(self, run: usize) -> Self {
        LabError::Run {
            run,
            source: Box::new(self),
        }
    }
}

impl From<llp_core::Error> for LabError {
    fn from(e: llp_core::Error) -> Self {
        use llp_core::Error as E;
        match e {
            E::Parameter(_) | E::Size { .. } => LabError::Config(e.to_string()),
            E::Training { .. } => LabError::Training(e.to_string()),
            E::Data(_) | E::Precondition(_) | E::Generation { .. } => LabError::Data(e.to_string()),
        }
    }
}
