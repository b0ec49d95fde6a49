use thiserror::Error;

/// Failure classes with their process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or input files; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A verification check failed; exit code 1.
    #[error("{0}")]
    Verification(String),
    #[error(transparent)]
    Library(#[from] sympovm::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Library(_) => 2,
            CliError::Output(_) => 1,
        }
    }
}
