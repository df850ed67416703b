use thiserror::Error;

/// Problems with an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("cannot read {0}")]
    Io(String),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}: {message}", if pointer.is_empty() { "/" } else { pointer.as_str() })]
    Schema { pointer: String, message: String },
}

impl InputError {
    pub fn schema(pointer: &str, message: impl Into<String>) -> Self {
        InputError::Schema { pointer: pointer.to_string(), message: message.into() }
    }

    /// JSON pointer of the offending value, for schema violations.
    pub fn pointer(&self) -> Option<&str> {
        match self {
            InputError::Schema { pointer, .. } => Some(pointer),
            _ => None,
        }
    }
}

/// Why a command produced no report. Maps onto the process exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("usage: {0}")]
    Usage(String),
    /// The engine refused the data, e.g. a model of the wrong dimension.
    #[error("{0}")]
    Rejected(String),
    #[error("engine limit: {0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Usage(_) | CliError::Rejected(_) => 1,
            CliError::Limit(_) => 2,
        }
    }
}

impl From<ussp_core::Error> for CliError {
    fn from(e: ussp_core::Error) -> Self {
        match e {
            ussp_core::Error::Limit(m) => CliError::Limit(m),
            other => CliError::Rejected(other.to_string()),
        }
    }
}
