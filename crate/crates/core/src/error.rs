use thiserror::Error;

/// Errors raised by the library. Verification failures that are part of a
/// normal report (a nonzero deviation, a non-total element) are values, not
/// errors; these variants cover malformed input and broken preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index out of range: {index} >= {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index-space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("not a kernel: {0}")]
    NotAKernel(String),

    #[error("not a distribution: {0}")]
    NotADistribution(String),

    #[error("invalid permutation: {0:?}")]
    Permutation(Vec<usize>),

    #[error("web condition violated at {0}")]
    WebCondition(String),

    #[error("element outside the clique: {0}")]
    OutsideClique(String),

    #[error("truncation depth {depth} exceeded by requested level {level}")]
    Depth { depth: usize, level: usize },

    #[error("square unsatisfiable at level {level}: {detail}")]
    SquareUnsatisfiable { level: usize, detail: String },

    #[error("not a copointed morphism: weakenings disagree at source index {source_index}")]
    NotCopointed { source_index: usize },

    #[error("leg at level {level} is not invariant under permutation {permutation:?}")]
    AsymmetricLeg {
        level: usize,
        permutation: Vec<usize>,
    },

    #[error("incompatible cone at level {level}")]
    IncompatibleCone { level: usize },

    #[error("element is not total: worst multiset {witness:?} with defect {defect}")]
    NotTotal { witness: Vec<u32>, defect: f64 },

    #[error("not completely monotone: coefficient at (a={a}, b={b}) is {value}")]
    NotCompletelyMonotone { a: usize, b: usize, value: String },

    #[error("linear program too large: {0}")]
    LpTooLarge(String),

    #[error("simplex stalled after {0} pivots")]
    LpStalled(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
