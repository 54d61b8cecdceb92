use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid substitution: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: &'static str, cap: u64 },
    #[error("window {0} is not in the source language")]
    InadmissibleWindow(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("{base} and {modulus} are not coprime")]
    NotCoprime { base: u64, modulus: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
