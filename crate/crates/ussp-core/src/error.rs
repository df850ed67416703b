use alloc::string::{String, ToString};
use core::fmt;

/// Engine errors. `Invalid` means malformed input data, `Limit` means the
/// finite engine cannot represent or search the requested object, and
/// `NotNormal` carries a witness for a failed normality precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    Invalid(String),
    Limit(String),
    NotNormal { degree: usize, witness: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl ToString) -> Self {
        Error::Invalid(msg.to_string())
    }

    pub fn limit(msg: impl ToString) -> Self {
        Error::Limit(msg.to_string())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, Error::Limit(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Limit(m) => write!(f, "engine limit: {m}"),
            Error::NotNormal { degree, witness } => {
                write!(f, "image of the differential is not normal in degree {degree}: {witness}")
            }
        }
    }
}
