use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProError {
    #[error("composition mismatch: {0}")]
    Composition(String),
    #[error("unsupported capability `{0}` for this base category")]
    Unsupported(&'static str),
    #[error("budget exhausted while searching for {search} (depth {depth})")]
    Budget { search: String, depth: usize },
    #[error("verification failed at {location}: {what}")]
    Verification { what: String, location: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("index category lacks a least upper bound for {0}")]
    MissingLeastUpperBound(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}

impl ProError {
    pub fn budget(search: impl Into<String>, depth: usize) -> Self {
        ProError::Budget {
            search: search.into(),
            depth,
        }
    }

    pub fn verification(what: impl Into<String>, location: impl Into<String>) -> Self {
        ProError::Verification {
            what: what.into(),
            location: location.into(),
        }
    }
}

pub type Result<T, E = ProError> = std::result::Result<T, E>;
