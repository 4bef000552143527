use eqcenter_core::Error as CoreError;

/// Process exit codes, stable across commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitStatus {
    Success = 0,
    Parse = 2,
    Validation = 3,
    Domain = 4,
    Internal = 5,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("verification failed: {0} trial(s) reported failures")]
    Verification(usize),

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => ExitStatus::Parse,
            CliError::Core(e) => core_status(e),
            CliError::Verification(_) | CliError::Output(_) => ExitStatus::Internal,
        }
    }
}

fn core_status(e: &CoreError) -> ExitStatus {
    match e {
        CoreError::OutOfDomain
        | CoreError::Collinear
        | CoreError::NoAffineCenter
        | CoreError::NotATriangle(_) => ExitStatus::Domain,
        CoreError::InvariantViolation(_) => ExitStatus::Internal,
        _ => ExitStatus::Validation,
    }
}
