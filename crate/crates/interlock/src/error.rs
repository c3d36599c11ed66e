use std::io;
use std::path::{Path, PathBuf};

/// Exit status for bad input files, schemas or arguments.
pub const EXIT_INPUT: i32 = 2;
/// Exit status for a stage that could not complete on valid input.
pub const EXIT_STAGE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] interlock_core::Error),
    #[error("stage `{stage}` failed: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Error {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn parse(path: &Path, message: impl std::fmt::Display) -> Error {
        Error::Parse { path: path.to_path_buf(), message: message.to_string() }
    }

    /// Process exit status. Stage wrappers report the status of their cause.
    pub fn exit_code(&self) -> i32 {
        use interlock_core::Error as Core;
        match self {
            Error::Io { .. } | Error::MissingColumn { .. } | Error::Parse { .. } | Error::Config(_) => EXIT_INPUT,
            Error::Core(Core::DuplicateCompany(_) | Core::Parameter(_)) => EXIT_INPUT,
            Error::Core(_) => EXIT_STAGE,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}
