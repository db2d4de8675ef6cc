use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported extension degree {0} (expected 1..=24)")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {degree}")]
    InvalidModulus { modulus: u32, degree: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element bits {bits:#x} out of range for a field of order {q}")]
    ElementOutOfRange { bits: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not an element of {0}")]
    NotInGroup(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration of {needed} elements exceeds the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value expected to be an integer is not: {0}")]
    NonIntegral(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
