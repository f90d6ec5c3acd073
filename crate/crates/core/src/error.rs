use thiserror::Error;

use crate::physconst::Unit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible units: cannot convert {from} to {to}")]
    IncompatibleUnits { from: Unit, to: Unit },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero field: the pendulum scale is undefined at E = 0 (rotor regime)")]
    ZeroField,

    #[error(
        "grid half-width L = {half_width} reaches the quartic turnover sqrt(6/lambda) = {turnover} (lambda = {lambda})"
    )]
    GridTurnover {
        lambda: f64,
        half_width: f64,
        turnover: f64,
    },

    #[error("level index {index} out of range ({available} levels computed)")]
    LevelOutOfRange { index: usize, available: usize },

    #[error("rk4 step too large: dt*gamma = {product} exceeds 0.1")]
    UnstableStep { product: f64 },

    #[error("integrator norm drift {drift:e} exceeds 1e-8")]
    NormDrift { drift: f64 },

    #[error("registry: {0}")]
    Registry(String),

    #[error("unknown molecule `{0}`")]
    UnknownMolecule(String),

    #[error("unknown output `{0}`")]
    UnknownOutput(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("nothing to report: row list is empty")]
    EmptyReport,

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
