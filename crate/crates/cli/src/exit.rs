//! Process exit codes.

use std::process::ExitCode;

use symkron_core::Error;

pub const OK: u8 = 0;
pub const FAILURE: u8 = 1;
pub const SIZE_CAP: u8 = 2;
pub const PARSE: u8 = 3;
pub const SHAPE: u8 = 4;
pub const PARAMS: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(PARSE, message)
    }

    pub fn report(&self) -> ExitCode {
        if !self.message.is_empty() {
            eprintln!("error: {}", self.message);
        }
        ExitCode::from(self.code)
    }
}

pub fn code_for(e: &Error) -> u8 {
    match e {
        Error::SizeOverflow(_) | Error::CapExceeded { .. } => SIZE_CAP,
        Error::Parse(_) => PARSE,
        Error::IndexOutOfRange { .. }
        | Error::ModulusMismatch { .. }
        | Error::DimensionMismatch(_)
        | Error::NotSymmetric { .. } => SHAPE,
        Error::Singular(_) | Error::NotUnitary { .. } | Error::ParamViolation { .. } => PARAMS,
        Error::Inconsistent(_) => FAILURE,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::new(code_for(&e), e.to_string())
    }
}
