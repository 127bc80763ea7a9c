use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage a failure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Load,
    Map,
    Replay,
    Isi,
    Aging,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Load => "load",
            Stage::Map => "map",
            Stage::Replay => "replay",
            Stage::Isi => "isi",
            Stage::Aging => "aging",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line} (`{record}`): {source}")]
    Record {
        line: usize,
        record: String,
        #[source]
        source: pumpwear_core::Error,
    },
    #[error(transparent)]
    Core(#[from] pumpwear_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{stage} stage: {source}")]
    Pipeline {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
    #[error("report: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps `self` with the stage it surfaced from.
    pub fn at(self, stage: Stage) -> Self {
        Error::Pipeline {
            stage,
            source: Box::new(self),
        }
    }

    /// Configuration and input problems, as opposed to runtime failures.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Record { .. } => true,
            Error::Core(e) => matches!(
                e,
                pumpwear_core::Error::InvalidSpec(_)
                    | pumpwear_core::Error::InvalidNbti(_)
                    | pumpwear_core::Error::InvalidPolicy(_)
                    | pumpwear_core::Error::InvalidLifParams(_)
                    | pumpwear_core::Error::InvalidRate { .. }
            ),
            Error::Pipeline { source, .. } => source.is_usage(),
            Error::Io { .. } | Error::Report(_) => false,
        }
    }
}
