use std::fmt;

/// Failures outside the verdict vocabulary. Verdict outcomes map to exit
/// statuses 0 (all valid), 1 (invalid step found), and 2 (inconclusive);
/// everything else lands here and exits above 2 so scripts can tell "the
/// check said no" apart from "the check never ran".
#[derive(Debug)]
pub enum CliError {
    /// Missing, unreadable, or malformed input: exit status 3.
    Input(String),
    /// Configuration, solver, or endpoint trouble: exit status 4.
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::Config(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(message) | CliError::Config(message) => f.write_str(message),
        }
    }
}

impl std::error::Error for CliError {}
