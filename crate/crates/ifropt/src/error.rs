use std::fmt;

use ifropt_core::optimizer::OptimizerError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Infeasible = 2,
    Internal = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        CliError {
            exit: Exit::Usage,
            message: message.to_string(),
        }
    }

    pub fn infeasible(message: impl fmt::Display) -> Self {
        CliError {
            exit: Exit::Infeasible,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl fmt::Display) -> Self {
        CliError {
            exit: Exit::Internal,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e)
    }
}

impl From<OptimizerError> for CliError {
    fn from(e: OptimizerError) -> Self {
        match e {
            OptimizerError::CertificateFailed(_) => CliError::internal(e),
            _ => CliError::usage(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
