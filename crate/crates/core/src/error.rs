use thiserror::Error;



/// Errors raised by the invariant engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cap mismatch: {0:?} vs {1:?}")]
    CapMismatch(String, String),
    #[error("series is not invertible: constant term is {0}")]
    NotInvertible(String),
    #[error("bad constant term for {op}: expected {expected}, found {found}")]
    BadConstantTerm {
        op: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("exponent ({0}, {1}) lies outside the cap")]
    OutOfCap(u32, u32),
    #[error("word is not in the tropical vertex group: {0}")]
    NotInGroup(String),
    #[error("BCH expansion does not terminate within order {0}")]
    NotNilpotent(usize),
    #[error("table is missing class ({0}, {1})")]
    IncompleteTable(u32, u32),
    #[error("index {index} out of range (have {len} exponents)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("refined run too large: {0}")]
    CapTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
