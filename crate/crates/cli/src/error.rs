use std::fmt;
use std::process::ExitCode;

use dipolekit_core::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or incomplete input; exit code 2.
    Config(String),
    /// A computation failed; exit code 3.
    Numerical(String),
    /// Output could not be written; exit code 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Domain(_) => CliError::Config(e.to_string()),
            Error::Numerical(_) | Error::DegenerateSteadyState(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::Config("x".into())).code(), 2);
        assert_eq!(CliError::from(Error::Domain("x".into())).code(), 2);
        assert_eq!(CliError::from(Error::Numerical("x".into())).code(), 3);
        assert_eq!(CliError::from(Error::DegenerateSteadyState(2)).code(), 3);
        assert_eq!(CliError::Io("x".into()).code(), 1);
    }
}
