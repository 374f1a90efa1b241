use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity must be at least 1 (got {0})")]
    Capacity(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("light cone exceeded: step {next} does not fit in halfwidth {halfwidth}")]
    LightCone { next: usize, halfwidth: usize },

    /// Invalid configuration; `path` names the offending field (`disorder.fractions[2]`).
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("numerical invariant violated: {0}")]
    Invariant(String),

    #[error("output already exists: {0} (pass --overwrite to replace)")]
    OutputExists(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
