use thiserror::Error;

/// Violated hypothesis reported by [`combine_embeddings`](crate::embed::combine_embeddings).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombineViolation {
    #[error("upper embedding must end strictly above the lower one: f'({upper_last}) = {upper_row} >= f''(1) = {lower_row}")]
    RowOrder {
        upper_last: usize,
        upper_row: usize,
        lower_row: usize,
    },
    #[error("column {col} carries 1-entries in both parts but g'({col}) = {upper_col} != g''({col}) = {lower_col}")]
    ColumnAgreement {
        col: usize,
        upper_col: usize,
        lower_col: usize,
    },
    #[error("column {col} has 1-entries on both sides of the cut but is not the designated spanning column")]
    SpanningColumn { col: usize },
    #[error("{part} part embedding is not a valid block-respecting embedding: {reason}")]
    PartEmbedding { part: &'static str, reason: String },
}

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("separability is undefined for single-row patterns")]
    SingleRow,

    #[error("pattern is not vertically degenerate")]
    NotDegenerate,

    #[error("extremal numbers are not defined for zero-weight patterns")]
    ZeroWeightPattern,

    #[error("node budget of {budget} exhausted after {explored} nodes; result would not be exact")]
    BudgetExceeded { budget: u64, explored: u64 },

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("reduction regime not reached: {0}")]
    Regime(String),

    #[error("no block k-set with {needed} good rows (best candidate has {found})")]
    NoGoodRows { needed: usize, found: usize },

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("combine hypothesis failed: {0}")]
    Combine(#[from] CombineViolation),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
