use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    /// The requested tolerance could not be reached; carries the best-effort value.
    #[error("precision error: requested tolerance {requested:e}, achieved {achieved:e}")]
    Precision {
        requested: f64,
        achieved: f64,
        re: f64,
        im: f64,
    },

    /// The operation requires a prime modulus; use the group-structure path instead.
    #[error("modulus {0} is not prime; use GroupStructure for composite moduli")]
    NotPrime(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
