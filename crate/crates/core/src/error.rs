use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments or a violated precondition.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("invalid form {form}: {reason}")]
    InvalidForm { form: String, reason: String },
    #[error("form is not isotropic at {0}")]
    NotIsotropic(u64),
    #[error("genus symbol at {place} is undefined: sampled characters disagree")]
    SymbolUndefined { place: String },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
