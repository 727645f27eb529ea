use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },

    #[error("modulus {modulus} is not p^r with r >= 2 for p = {p}")]
    BadProjection { modulus: u64, p: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("coset partition check failed: {0}")]
    PartitionFailed(String),

    #[error("table of {entries} entries exceeds the cap of {cap}; use streaming evaluation")]
    MemoryCap { entries: u128, cap: u128 },

    #[error("p = {p} exceeds the limit {limit} for {what}")]
    TooLarge { p: u64, limit: u64, what: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("empty cell list")]
    EmptyCells,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("cache I/O: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
