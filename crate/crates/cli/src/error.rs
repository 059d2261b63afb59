use serde_json::json;

/// Failures of a CLI run, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for `{key}`: {message}")]
    Key { key: String, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("numerical diagnostic: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn key(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Key { key: key.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }

    /// The message printed on stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Key { .. } | CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        };
        let mut err = json!({ "kind": kind, "message": self.to_string() });
        if let CliError::Key { key, .. } = self {
            err["key"] = json!(key);
        }
        json!({ "error": err })
    }
}

impl From<jetmorse::Error> for CliError {
    fn from(e: jetmorse::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
