use ordinal_seasonality::Error as CoreError;
use thiserror::Error;

/// Exit status for failures caused by bad arguments or bad input data.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for everything else.
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_)
            | CoreError::DegenerateSeries(_)
            | CoreError::Schema { .. }
            | CoreError::Order { .. }
            | CoreError::RejectedRow { .. }
            | CoreError::Csv(_)
            | CoreError::Io(_) => CliError::Input(e.to_string()),
            CoreError::DegenerateFrequency { .. } => CliError::Internal(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
