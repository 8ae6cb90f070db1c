use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: bad depth, prior table, flag value, etc.
    #[error("configuration error: {0}")]
    Config(String),

    /// A call violated an API precondition (depth mismatch, out-of-range order).
    #[error("usage error: {0}")]
    Usage(String),

    /// A statistic was requested before any data was recorded.
    #[error("no data recorded yet: {0}")]
    EmptyData(&'static str),

    /// A computed mixability gap was negative beyond floating-point noise.
    #[error("numerical consistency error: mixability gap {delta:e} at round {round}")]
    Numerical { round: u64, delta: f64 },

    /// A bound check or tolerance check failed.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// Malformed input file (sequence file, prior table, trace CSV).
    #[error("malformed input {path}: {msg}")]
    Parse { path: PathBuf, msg: String },
}

impl Error {
    /// Process exit code used by the CLI: 1 config, 2 check failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::EmptyData(_) => 1,
            Error::CheckFailed(_) | Error::Numerical { .. } => 2,
            Error::Io { .. } | Error::Csv { .. } | Error::Parse { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
