use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limit(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Limit(_) | CliError::Io(_) | CliError::Internal(_) => 3,
        }
    }
}

impl From<feign_core::Error> for CliError {
    fn from(e: feign_core::Error) -> Self {
        use feign_core::Error as E;
        match e {
            E::HorizonTooLarge { .. } | E::StateSpaceTooLarge { .. } => {
                CliError::Limit(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
