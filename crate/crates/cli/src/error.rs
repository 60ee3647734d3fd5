use std::fmt;
use std::process::ExitCode;

/// Failure of a CLI run, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad command line. Exit 64.
    Usage(String),
    /// Input that does not parse or violates a precondition. Exit 2.
    Validation(String),
    /// Numerical abort during integration. Exit 3.
    Instability(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 64,
            CliError::Validation(_) => 2,
            CliError::Instability(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Instability(m) => write!(f, "numerical instability: {m}"),
        }
    }
}

impl From<qgame::Error> for CliError {
    fn from(e: qgame::Error) -> Self {
        if e.is_instability() {
            CliError::Instability(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}
