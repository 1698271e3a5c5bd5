use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{value} has a pole at theta = {theta}")]
    Pole { value: String, theta: f64 },

    #[error("series requires truncation: ad x is not nilpotent")]
    SeriesRequiresTruncation,

    #[error("BCH requires nilpotent algebra")]
    NotNilpotent,

    #[error("nilpotency class {class} exceeds the supported maximum {max}")]
    ClassTooLarge { class: usize, max: usize },

    #[error("h not an ideal")]
    NotAnIdeal,

    #[error("h not inside stabilizer")]
    NotInStabilizer,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
