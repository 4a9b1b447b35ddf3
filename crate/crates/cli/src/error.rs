use std::fmt;

use fejer_core::checkers::CheckError;
use fejer_core::extremal::ExtremalError;
use fejer_core::special::ConstantError;
use fejer_core::QuadratureError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NonConverged(String),
    NoBracket(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::NonConverged(s) | CliError::NoBracket(s) => f.write_str(s),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::NonConvergence { .. } | QuadratureError::NonFinite { .. } => {
                CliError::NonConverged(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ConstantError> for CliError {
    fn from(e: ConstantError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::NoBracket { .. } => CliError::NoBracket(e.to_string()),
            ExtremalError::Quadrature(q) => q.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Quadrature(q) => q.into(),
            CheckError::Extremal(x) => x.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
