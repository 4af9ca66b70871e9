use std::fmt;
use std::process::ExitCode;

use bhkernel::Error;

/// Command failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Invariant(String),
    Usage(String),
    Tolerance(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Tolerance(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invariant(m) | Failure::Usage(m) | Failure::Tolerance(m) | Failure::Io(m) => {
                f.write_str(m)
            }
        }
    }
}

/// Out-of-domain arguments are a configuration problem; everything else is a
/// numerical failure.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidParams(_) | Error::InvalidContext(_) | Error::Pole(_) => {
                Failure::Usage(e.to_string())
            }
            Error::ToleranceNotMet { .. } | Error::TermBudgetExceeded { .. } | Error::Contour { .. } => {
                Failure::Tolerance(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}
