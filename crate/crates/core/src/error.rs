use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index m must be at least 3, got {0}")]
    IndexTooSmall(u32),

    #[error("index m = {m} exceeds the configured cap of {cap}")]
    IndexTooLarge { m: u32, cap: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields (m = {0} and m = {1})")]
    FieldMismatch(u32, u32),

    #[error("{0} lies outside [-lambda/2, lambda/2)")]
    OutOfInterval(String),

    #[error("the Rosen map has no partial quotient at 0")]
    ZeroStep,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inadmissible input: {0}")]
    Inadmissible(String),

    #[error("not enough continued fraction terms: {0}")]
    InsufficientTerms(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
