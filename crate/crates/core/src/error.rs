use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum H2Error {
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("n = {n} has a prime factor outside the first {d} primes")]
    PrimeOutOfRange { n: u64, d: usize },
    #[error("support cap exceeded: {required} terms required, cap is {cap}")]
    SupportCap { required: u128, cap: u128 },
    #[error("tail bound {tail:e} still above tolerance after K = {k_max} terms")]
    TailNotCertified { tail: f64, k_max: usize },
    #[error("matrix of size {rows} x {cols} exceeds the size cap")]
    SizeCap { rows: usize, cols: usize },
    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a self-map of the unit disc: max |phi| on the circle is {max_modulus}")]
    NotSelfMap { max_modulus: f64 },
    #[error("pole proximity {distance:e} below 1e-12")]
    PoleProximity { distance: f64 },
    #[error("k = {k} beyond the exact-arithmetic limit {limit}")]
    ExactLimit { k: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, H2Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(H2Error::Domain(msg.into()))
}
