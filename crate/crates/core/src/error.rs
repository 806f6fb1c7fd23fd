use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("capacity exceeded: {what} is {size}, limit {limit}")]
    Capacity {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("argument of valuation {valuation} exceeds character depth {depth}")]
    DepthExceeded { depth: u32, valuation: i64 },

    #[error("depth {given} is too small, required depth is {required}")]
    DepthTooSmall { given: u32, required: u32 },

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("sort error: {0}")]
    Sort(String),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("{0} must be in 𝒞ᵉ")]
    NotCe(String),

    #[error("singular determinant")]
    Singular,

    #[error("divergence detected: shell sums grow ({prev} -> {last})")]
    Divergent { prev: String, last: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn capacity(what: &'static str, size: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Capacity {
            what,
            size: size.into(),
            limit: limit.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
