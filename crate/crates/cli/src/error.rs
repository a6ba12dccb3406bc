use thiserror::Error;

/// Everything that ends a command early, with its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// JSON syntax error, with line and column.
    #[error("{0}")]
    Syntax(String),

    /// Semantic error at a field path such as `worker_specs[0].quota`.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] schedmatch::Error),

    /// `verify --expect-stable` on an unstable set.
    #[error("{0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Invalid { path: path.into(), message: message.to_string() }
    }

    /// 0 success, 1 usage or parse error, 2 verification failed, 3 cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 2,
            CliError::Core(schedmatch::Error::CapExceeded { .. } | schedmatch::Error::TableTooLarge { .. }) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
