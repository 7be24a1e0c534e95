use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command, carrying the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}, column {column:?}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        column: String,
        message: String,
    },
    #[error("invalid data: {0}")]
    Data(histspline::Error),
    #[error("numeric failure: {0}")]
    Numeric(histspline::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<histspline::Error> for CliError {
    fn from(e: histspline::Error) -> Self {
        use histspline::Error::*;
        match e {
            InvalidRanges(_) | InvalidScenario(_) | InvalidBinRule(_) | InvalidGrid { .. } => {
                CliError::Usage(e.to_string())
            }
            EmptyInput(_) | NonFiniteInput { .. } | InvalidWeights(_) | LengthMismatch { .. }
            | ZeroRange | NonMonotoneKnots(_) | InvalidHistogram(_) => CliError::Data(e),
            _ => CliError::Numeric(e),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
