use thiserror::Error;

/// Failures of a command, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(#[from] eccoax_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for configuration and i/o problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 1,
            Self::Solver(_) | Self::Validation(_) => 2,
        }
    }
}
