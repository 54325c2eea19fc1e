use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("root of unity with denominator {den} does not divide order {order}")]
    OrderMismatch { den: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("assumption violated ({clause}): {detail}")]
    Assumption { clause: &'static str, detail: String },
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),
    #[error("psi argument needs p-depth {depth} > {max}")]
    CyclotomicOverflow { depth: u32, max: u32 },
    #[error("invalid coset address: {0}")]
    InvalidAddress(String),
    #[error("no factorization found: {0}")]
    NotFound(String),
    #[error("factorization does not verify: {0}")]
    InvalidFactorization(String),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("stabilization failed: {0}")]
    Stabilization(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
