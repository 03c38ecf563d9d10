use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] jackstein::error::Error),
    #[error("chains require alpha >= 1, got {0}; for alpha < 1 use the duality Jack_alpha(lambda) = Jack_1/alpha(lambda'), which sends W to -W")]
    ChainAlpha(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Every error here is a usage or environment problem; check failures
    /// are reported through the normal output with status 1.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
