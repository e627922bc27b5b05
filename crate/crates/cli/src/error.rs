use std::fmt;
use std::process::ExitCode;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2. `field` names the offending parameter.
    Config { field: String, message: String },
    /// A computed quantity broke its contract; exit code 1.
    Numerical(String),
    /// Reading or writing files failed; exit code 1.
    Io(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn missing(field: &str) -> Self {
        CliError::config(field, "is required (flag or config file)")
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config { .. } => ExitCode::from(2),
            CliError::Numerical(_) | CliError::Io(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "config error: `{field}` {message}"),
            CliError::Numerical(m) => write!(f, "numerical contract failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<satolab::Error> for CliError {
    fn from(e: satolab::Error) -> Self {
        use satolab::Error as E;
        match e {
            E::InvalidArgument { field, reason } => CliError::config(field, reason),
            E::NotPrime(p) => CliError::config("p", format!("{p} is not prime")),
            E::UnsupportedDegree(d) => CliError::config("field", format!("degree {d} is not supported")),
            E::RepeatedIdeal(n) => CliError::config("ideals", format!("repeated prime ideal of norm {n}")),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
