use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// P·Q·M·N cannot hold the seed segment, or the mat has too few PEs.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("layout error: {0}")]
    Layout(String),
    /// Cost table or design document is unusable (unpriced op, bad entry).
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] odhd_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
