use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: grid has {expected} points, got {actual} values")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("normalization drift {drift:.3e} exceeds {tolerance:.1e}")]
    Normalization { drift: f64, tolerance: f64 },

    #[error("propagation accuracy failure: norm drift {drift:.3e} exceeds {tolerance:.1e}")]
    Accuracy { drift: f64, tolerance: f64 },

    #[error("grid of {n} points exceeds the oracle limit of {max}")]
    GridTooLarge { n: usize, max: usize },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_time(self, t: f64) -> Self {
        Error::AtTime {
            t,
            source: Box::new(self),
        }
    }
}
