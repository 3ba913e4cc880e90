use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which queue of a station ran out of capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueueKind {
    Radio,
    Backhaul,
}

impl std::fmt::Display for QueueKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QueueKind::Radio => "radio",
            QueueKind::Backhaul => "backhaul",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("traffic point {point} is not covered by any base station")]
    UncoveredPoint { point: usize },

    #[error("traffic point {point} is associated with BS {bs_id}, which offers it zero rate")]
    ZeroRateAssignment { point: usize, bs_id: u32 },

    #[error("BS {bs_id} {queue} queue saturated at load {load}")]
    Saturated { bs_id: u32, queue: QueueKind, load: f64 },

    #[error("load {0} is outside [0, 1)")]
    LoadOutOfRange(f64),

    #[error("association shape mismatch: {0}")]
    Shape(String),

    #[error("every candidate bias leads to a saturated network")]
    NoFeasibleBias,

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }
}
