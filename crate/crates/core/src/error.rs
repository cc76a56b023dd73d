use thiserror::Error;

use crate::automaton::LowMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// The unsafe low mode has no control law.
    #[error("no control law for low mode {0}")]
    UnsafeMode(LowMode),

    #[error("lane exit requested while a maneuver is in progress (steering = {steering} rad)")]
    ManeuverInProgress { steering: f64 },

    #[error("new leader gap must be positive, got {0} m")]
    NonPositiveLeaderGap(f64),

    #[error("scenario error at `{path}`: {message}")]
    Scenario { path: String, message: String },

    #[error("vehicle {id} fails the initial-set check: {reason}")]
    InitCheck { id: u32, reason: String },

    #[error("collision between vehicles {a} and {b} at t = {t:.3} s (gap {gap:.4} m)")]
    Collision { t: f64, a: u32, b: u32, gap: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scenario {
            path: path.into(),
            message: message.into(),
        }
    }
}
