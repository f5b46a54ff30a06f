use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point outside the model domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("decay metadata missing; cannot choose a truncation length")]
    MissingDecay,

    #[error("grid function does not decay at the grid ends (edge/max = {edge_ratio:.3e}); use grid_T >= {required_half_width}")]
    Wraparound {
        edge_ratio: f64,
        required_half_width: f64,
    },

    #[error("calibration constant `{0}` has not been frozen; run `calibrate` first")]
    NotCalibrated(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
