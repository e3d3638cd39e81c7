use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] d2dsec::Error),

    #[error("{origin}: {source}")]
    Scenario {
        origin: String,
        #[source]
        source: d2dsec::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stdout closed by the reader, e.g. `| head`.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io { source, .. } => Some(source),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }

    /// 2 input error, 3 capacity guard, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        use d2dsec::Error as E;
        let core = match self {
            CliError::Scenario { source, .. } => source,
            CliError::Core(e) => e,
            _ => return 2,
        };
        match core {
            E::CapacityGuard { .. } => 3,
            E::Quadrature { .. } | E::ZeroUtility(_) | E::Domain { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
