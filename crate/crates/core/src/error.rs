use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("class is not a root (needs square -2 and orthogonal to K)")]
    NotARoot,
    #[error("unsupported rank {0} (expected {1})")]
    UnsupportedRank(usize, &'static str),
    #[error("conic class has {found} reducible fibers, expected {expected}")]
    FiberCountViolation { expected: usize, found: usize },
    #[error("Weyl group of rank {0} is too large to enumerate")]
    GroupTooLarge(usize),
    #[error("index {index} out of range 0..{len}")]
    IndexError { index: usize, len: usize },
    #[error("kernel has dimension {0}, expected 1")]
    KernelDimensionViolation(usize),
    #[error("kernel generator entry {index} is {value}, expected +1 or -1")]
    SignViolation { index: usize, value: String },
    #[error("class function is not a character: multiplicity {0} is not an integer")]
    NotACharacter(String),
    #[error("memory budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("internal error: {0}")]
    InternalError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
