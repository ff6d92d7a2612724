use std::io;

/// CLI-level errors, each mapped to a process exit code:
/// config/validation -> 2, solver -> 3, I/O -> 4.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(htg_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<htg_core::Error> for CliError {
    fn from(e: htg_core::Error) -> Self {
        use htg_core::Error::*;
        match e {
            PivotLimit { .. } | DualityGap { .. } | Unbounded | NoEquilibrium => {
                CliError::Solver(e)
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
