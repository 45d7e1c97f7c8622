use thiserror::Error;

/// Errors produced by the simulation and analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A critical-window parameter maps outside the unit interval.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    /// The process does not settle at the end of the evaluated window.
    #[error("window too short: terminal value {terminal} exceeds {bound}")]
    WindowTooShort { terminal: i64, bound: i64 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
