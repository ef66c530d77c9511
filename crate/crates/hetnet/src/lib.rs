//! Configuration files, parallel Monte Carlo and the scenario runner on top
//! of `hetnet-core`.

pub mod config;
pub mod mc;
pub mod scenario;

pub use config::{load_network, ConfigFile};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("reading {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("parsing JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] hetnet_core::Error),
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Model(hetnet_core::Error::NotConverged { .. }) => 2,
            _ => 1,
        }
    }
}
