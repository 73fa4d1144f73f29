use thiserror::Error;

/// Exit code for unreadable, unparsable or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code when a cross-check flags a result.
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("cannot parse {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("invalid state in {path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("invalid arguments: {0}")]
    Arguments(String),
    #[error("cannot write {path}: {reason}")]
    Write { path: String, reason: String },
    #[error("computation failed: {0}")]
    Compute(#[from] discord_core::DiscordError),
    #[error("cross-check violation: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        }
    }
}
