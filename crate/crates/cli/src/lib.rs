//! Library half of the `monohecke` binary: subcommand bodies and the
//! structure-constant cache.

pub mod cache;
pub mod commands;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] monohecke::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(monohecke::Error::InvalidInput(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}
