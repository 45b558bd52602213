use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector is not a bisection of row {n}")]
    NotASolution { n: usize },

    #[error("brute force is capped at n = {cap}, requested n = {n}")]
    BruteForceCap { n: usize, cap: usize },

    /// An a-priori size estimate exceeded the configured budget.
    #[error("resource limit: {what} needs ~{needed}, budget is {budget}")]
    ResourceLimit {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: String, value: u128, cap: u128 },

    #[error("quadrature did not reach tolerance {tolerance:e}: estimated error {estimate:e}")]
    QuadratureNotConverged { tolerance: f64, estimate: f64 },

    /// A closed-form family instance failed exact verification.
    #[error("identity verification failed: {0}")]
    IdentityFailed(String),

    #[error("ternary vector of order {m} is not an identity")]
    NotAnIdentity { m: usize },

    #[error("ternary vector does not satisfy the IVP property")]
    IvpViolation,

    #[error("first sign is inconsistent with the first nonzero entry")]
    InconsistentSign,

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// An internal consistency check failed.
    #[error("check failed: {0}")]
    CheckFailed(String),
}
