use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrqaError {
    #[error("{what} = {value} is outside the legal interval [{min}, {max}]")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("invalid width: {0}")]
    InvalidWidth(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("circuit is not a permutation: {0}")]
    NotAPermutation(String),
    #[error("degenerate measurement: {0}")]
    DegenerateMeasurement(String),
    #[error("state is not FRQA-shaped: {0}")]
    NotFrqaShaped(String),
    #[error("degenerate restriction: {0}")]
    DegenerateRestriction(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FrqaError {
    pub(crate) fn range(what: &'static str, value: i64, min: i64, max: i64) -> Self {
        FrqaError::Range {
            what,
            value,
            min,
            max,
        }
    }
}

pub type Result<T> = std::result::Result<T, FrqaError>;
