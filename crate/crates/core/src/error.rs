use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `a + b` lands on a gap that is not allowed to be one.
    #[error("set is not closed under addition: {a} + {b} = {sum} is a gap")]
    NotClosed { a: u32, b: u32, sum: u32 },

    #[error("Frobenius number {f} cannot be a member")]
    FrobeniusViolated { f: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configured node or wall-clock budget ran out mid-search.
    #[error("enumeration budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    /// The request is larger than the operation is willing to attempt.
    #[error("{what} = {value} exceeds the supported maximum {max}")]
    OutOfBudget {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error("invalid (Y, Z) pair: {0}")]
    InvalidPair(String),

    /// Closed-form class counts only hold for f > 6 Max(Y) + 6.
    #[error("f = {f} is too small for Max(Y) = {max_y}; need f > {}", 6 * max_y + 6)]
    FTooSmall { f: u32, max_y: u32 },

    #[error("semigroup has depth {depth}, expected depth 3")]
    NotDepth3 { depth: u32 },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}
