use thiserror::Error;

/// Errors raised by the arithmetic layers, the module constructions and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{poly} is not monic")]
    NotMonic { poly: String },
    #[error("{poly} is reducible: divisible by {factor}")]
    Reducible { poly: String, factor: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("leading coefficient {0} is not a unit")]
    NonUnitLeading(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no root of {0} in the requested extension")]
    NoRoot(String),
    #[error("base does not have characteristic p: varpi(gamma) = {0}")]
    NotCharacteristicP(String),
    #[error("module is supersingular")]
    Supersingular,
    #[error("kernel is not stable: {0}")]
    NotStable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("check [{label}] failed: {detail}")]
    CheckFailed { label: String, detail: String },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn check(label: &str, detail: impl Into<String>) -> Self {
        Error::CheckFailed { label: label.to_string(), detail: detail.into() }
    }
}
