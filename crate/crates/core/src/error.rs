use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("assignment has no marked item")]
    NoMarkedItem,

    #[error("degenerate polar frame for N = {n}, M = {m} (need N > M >= 2)")]
    DegenerateFrame { n: usize, m: usize },

    #[error("state leaves the invariant subspace (residual {residual:e})")]
    NotInSubspace { residual: f64 },

    #[error("progress function undefined at theta = {theta}")]
    UndefinedProgress { theta: f64 },

    #[error("empty sampling grid")]
    EmptyGrid,

    #[error("inner rotation overshoots: t_inner = {t_inner} exceeds {max}")]
    Overshoot { t_inner: u64, max: u64 },

    #[error("N = {n} exceeds the brute-force limit {limit}")]
    BruteForceRegime { n: usize, limit: usize },

    #[error("no block size fits scaled cost {scaled_cost}; raise the scale factor K")]
    EstoInfeasible { scaled_cost: String },

    #[error("strategy did not halt within {limit} steps")]
    StepLimit { limit: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zero initial overlap needs infinitely many iterations")]
    ZeroOverlap,

    #[error("root finding failed: {0}")]
    Root(String),
}
