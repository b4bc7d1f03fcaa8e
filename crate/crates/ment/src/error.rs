use thiserror::Error;

/// Library error type. The CLI maps the variants onto exit codes
/// (parse → 2, precondition → 3, internal → 4).
#[derive(Debug, Error)]
pub enum MentError {
    #[error("parse: {0}")]
    Parse(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, MentError>;

impl MentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            MentError::Parse(_) => 2,
            MentError::Precondition(_) => 3,
            MentError::Internal(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MentError::Parse(_) => "parse",
            MentError::Precondition(_) => "precondition",
            MentError::Internal(_) => "internal",
        }
    }
}
