//! CLI error type with the exit-code contract:
//! 0 success, 2 configuration error, 3 dimension budget, 4 invariant violation.

use qdarwin::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, or parameter ranges (exit 2).
    Config(String),
    /// Scenario exceeds the dense dimension budget (exit 3).
    Budget(String),
    /// An internal invariant failed while running (exit 4).
    Invariant(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Invariant(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Budget(m) => write!(f, "budget error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            CoreError::InvalidParameter(_) => CliError::Config(err.to_string()),
            other => CliError::Invariant(other.to_string()),
        }
    }
}
