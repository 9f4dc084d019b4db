use gammaratio::Error;

/// Failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SPEC: i32 = 3;
pub const EXIT_POLE: i32 = 4;
pub const EXIT_RANGE: i32 = 5;

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError { code: EXIT_PARSE, message }
    }

    pub fn spec(message: String) -> Self {
        CliError { code: EXIT_SPEC, message }
    }

    pub fn io(path: &str, e: std::io::Error) -> Self {
        CliError { code: EXIT_PARSE, message: format!("cannot read {path}: {e}") }
    }

    /// Output failures; a closed pipe is not an error.
    pub fn write(e: std::io::Error) -> Result<(), Self> {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Ok(());
        }
        Err(CliError { code: EXIT_PARSE, message: format!("cannot write output: {e}") })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::UnboundSymbol(_) => EXIT_PARSE,
            Error::Pole(_) | Error::BranchCut(_) => EXIT_POLE,
            Error::Range { .. } => EXIT_RANGE,
            _ => EXIT_SPEC,
        };
        let mut message = format!("{e}");
        if let Error::Range { available, .. } = e {
            message.push_str(&format!("; rerun with --order at least the largest N (currently {available})"));
        }
        CliError { code, message }
    }
}
