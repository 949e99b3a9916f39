use std::io;

use qdstark_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid input ({context}): {source}")]
    Invalid { context: String, source: CoreError },
    #[error("numerical failure ({context}): {source}")]
    Numerical { context: String, source: CoreError },
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// 1 for configuration and validation problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical { .. } => 2,
            _ => 1,
        }
    }

    /// Sorts a core error by whether the inputs or the numerics are at fault.
    pub fn from_core(context: impl Into<String>, source: CoreError) -> Self {
        let context = context.into();
        match source {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidSchedule(_)
            | CoreError::InvalidConfig(_)
            | CoreError::NotNormalized { .. }
            | CoreError::InvalidDensityMatrix(_)
            | CoreError::EmptyGrid => RunError::Invalid { context, source },
            _ => RunError::Numerical { context, source },
        }
    }
}

pub(crate) trait Context<T> {
    fn context(self, what: &str) -> Result<T, RunError>;
}

impl<T> Context<T> for Result<T, CoreError> {
    fn context(self, what: &str) -> Result<T, RunError> {
        self.map_err(|e| RunError::from_core(what, e))
    }
}

pub type Result<T, E = RunError> = std::result::Result<T, E>;
