use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IprError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed row: {0}")]
    MalformedRow(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("row {row} has support outside its declared bound {bound}")]
    SupportBoundViolated { row: usize, bound: usize },
    #[error("row generator produced no row {0}")]
    GeneratorExhausted(usize),
    #[error("matrix has a zero row at index {0}")]
    ZeroRow(usize),
    #[error("non-integer entry at ({row}, {col})")]
    NonIntegerEntry { row: usize, col: usize },
    #[error("row {row} sums to {got}, expected {expected}")]
    RowSumMismatch { row: usize, expected: String, got: String },
    #[error("rows do not share a common sum")]
    NonConstantRowSum,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration budget exceeded: {needed} colorings requested, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
}
