use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {0} digits is below the minimum of 10")]
    InvalidPrecision(u32),

    #[error("matrix is singular at working precision (pivot column {column})")]
    SingularMatrix { column: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("off-diagonal entry {index} is not positive")]
    NonPositiveOffdiagonal { index: usize },

    #[error("level {level} outside the supported range 1..={max}")]
    LevelTooLarge { level: u32, max: u32 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("empty interval: left endpoint {left} is not below right endpoint {right}")]
    EmptyInterval { left: String, right: String },

    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },

    #[error("discrete inner product <p_{degree}, p_{degree}> is not positive")]
    LostOrthogonality { degree: usize },

    #[error("need {needed} moments, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("mixed moment sigma_({degree},{degree}) is not positive")]
    LostPositivity { degree: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the numbers themselves rather than by
    /// malformed requests or I/O.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::NonPositiveOffdiagonal { .. }
                | Error::LostOrthogonality { .. }
                | Error::LostPositivity { .. }
        )
    }
}
