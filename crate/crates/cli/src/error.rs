use dunkl_core::error::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    /// λ ≤ 0, non-invariant multiplicities, points outside the domain.
    #[error("{0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{0}")]
    Runtime(CoreError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Runtime(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub fn io(path: &str, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonPositiveLambda { lambda, gamma, dim } => CliError::Precondition(format!(
                "λ = γ + d/2 − 1 = {} is not positive (γ = {gamma}, d = {dim}); the process is not transient",
                (lambda * 1e12).round() / 1e12
            )),
            CoreError::NotInvariant(_) | CoreError::Singularity { .. } | CoreError::Domain(_) => {
                CliError::Precondition(e.to_string())
            }
            CoreError::Config(m) => CliError::Config(m),
            other => CliError::Runtime(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
