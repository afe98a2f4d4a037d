use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid user configuration or input data.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller broke an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An argument violated a documented contract (e.g. a hypervolume point
    /// that does not dominate the reference point).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid canonical key at offset {offset}: {message}")]
    KeyParse { offset: usize, message: String },

    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("malformed run log line {line}: {message}")]
    RunLog { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
