use odhd_cim::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Capacity(_) => 4,
            CliError::Domain(_) => 5,
        }
    }
}

impl From<odhd_core::Error> for CliError {
    fn from(e: odhd_core::Error) -> Self {
        use odhd_core::Error as E;
        match e {
            E::Parse { .. } | E::Format(_) => CliError::Parse(e.to_string()),
            E::InvalidArgument(_) | E::DimensionMismatch { .. } | E::Domain(_) => CliError::Domain(e.to_string()),
            E::Io(_) => CliError::Other(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Capacity(_) | SimError::Layout(_) => CliError::Capacity(e.to_string()),
            SimError::Config(_) => CliError::Config(e.to_string()),
            SimError::InvalidArgument(_) => CliError::Domain(e.to_string()),
            SimError::Json(_) => CliError::Parse(e.to_string()),
            SimError::Core(inner) => inner.into(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
