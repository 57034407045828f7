use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid user count K={k}: must be at least {min}")]
    InvalidUserCount { k: usize, min: usize },

    #[error("{what} index {index} out of range 1..={k}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        k: usize,
    },

    #[error("duplicate link (rx {rx}, tx {tx})")]
    DuplicateLink { rx: usize, tx: usize },

    #[error("coherence given for absent link (rx {rx}, tx {tx})")]
    CoherenceWithoutLink { rx: usize, tx: usize },

    #[error("invalid coherence value: {0}")]
    InvalidCoherence(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("exact search refused for K={k} (limit {limit}); pass an explicit override to run it anyway")]
    SizeGuard { k: usize, limit: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn from_json(err: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let path = err.path().to_string();
        Error::Parse {
            path,
            message: err.into_inner().to_string(),
        }
    }
}

/// Deserializes `text` reporting the path of the first offending field.
pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(Error::from_json)
}
