use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: mrd_core::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] mrd_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Input { .. } => 2,
            CliError::Core(e) if is_parameter_error(e) => 2,
            CliError::Write { .. } | CliError::Core(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) if is_parameter_error(e) => "usage",
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Input { source, .. } | CliError::Core(source) => match source {
                mrd_core::Error::Parse { .. } => "parse",
                mrd_core::Error::Validation(_) => "validation",
                mrd_core::Error::BudgetExceeded(_) => "budget",
                _ => "computation",
            },
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        let source = match self {
            CliError::Input { source, .. } | CliError::Core(source) => Some(source),
            _ => None,
        };
        if let Some(mrd_core::Error::Parse { line, column, .. }) = source {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        if let CliError::Read { path, .. } | CliError::Input { path, .. } | CliError::Write { path, .. } = self {
            v["path"] = json!(path);
        }
        v.to_string()
    }
}

/// Errors caused by the requested parameters rather than by the computation.
fn is_parameter_error(e: &mrd_core::Error) -> bool {
    use mrd_core::Error::*;
    matches!(
        e,
        InvalidParameters(_) | ConditionsViolated(_) | UnknownFixture(_) | NotPrime(_) | TooLarge(_) | ParameterMismatch(_)
    )
}

pub type CliResult<T> = Result<T, CliError>;
