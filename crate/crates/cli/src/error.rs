use std::process::ExitCode;

/// Failures surfaced to the shell.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] sosrank_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// A verification or lemma check came out negative.
    Failed = 1,
    Usage = 2,
    Internal = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

impl CliError {
    pub fn status(&self) -> Status {
        use sosrank_core::Error as E;
        match self {
            CliError::Internal(_)
            | CliError::Core(E::Internal(_))
            | CliError::Core(E::PermutationSearchExhausted) => Status::Internal,
            _ => Status::Usage,
        }
    }
}
