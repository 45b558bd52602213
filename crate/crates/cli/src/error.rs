use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bcb_core::Error),
    #[error("cache {}: {message}", path.display())]
    Cache { path: PathBuf, message: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 2 usage, 3 resource refusal, 4 verification failure, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use bcb_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 4,
            CliError::Core(e) => match e {
                E::ResourceLimit { .. } | E::BruteForceCap { .. } | E::CapExceeded { .. } => 3,
                E::InvalidArgument(_) | E::Malformed(_) | E::NotPrime(_) => 2,
                _ => 4,
            },
            CliError::Cache { .. } | CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
