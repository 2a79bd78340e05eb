use std::fmt;

/// CLI failures, split by exit code: validation problems exit 1, I/O problems exit 2.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag value, inconsistent configuration, or invalid signal content.
    Validation(String),
    /// Missing files, malformed file content, unsupported formats, write failures.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<linchirp::Error> for CliError {
    fn from(e: linchirp::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Wraps an I/O error with the path it concerns.
pub fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
