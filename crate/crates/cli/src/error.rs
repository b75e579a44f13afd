use bicons_core::Error;

/// An error carrying the process exit code it should produce.
///
/// Exit code conventions: 2 for usage and precondition failures (bad flags,
/// inadmissible parameters, malformed input files), 3 for numerical failures
/// (divergence, stalled quadrature, inconsistent data). Verdict-style
/// failures (a check that ran and said "no") exit 1 and are not errors; the
/// commands return that code directly.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Domain(_) | Error::Precondition(_) | Error::EmptyRange(_) => 2,
            _ => 3,
        };
        CliError { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError { code: 3, message: format!("i/o error: {err}") }
    }
}

pub type CliResult<T> = Result<T, CliError>;
