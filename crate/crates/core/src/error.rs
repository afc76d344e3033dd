use thiserror::Error;

/// Errors produced by the arithmetic, factorization and scheme operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd undefined: both arguments are zero")]
    GcdUndefined,
    #[error("not invertible: gcd({value}, {modulus}) != 1")]
    NotInvertible { value: String, modulus: String },
    #[error("order undefined: gcd({value}, {modulus}) != 1")]
    OrderUndefined { value: String, modulus: String },
    /// A precondition on an argument's range was violated.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: n = {n} is above the enumeration limit {limit}")]
    Capacity { n: String, limit: u64 },
    #[error("invalid exponent: gcd(e, phi(N)) != 1 or e out of range ({0})")]
    InvalidExponent(String),
    #[error("modulus too small: {0}")]
    ModulusTooSmall(String),
    #[error("cannot compute phi(N): factorization of {0} timed out")]
    FactorTimeout(String),
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A proven property was observed to fail; indicates an implementation bug.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
