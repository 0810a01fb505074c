//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cyclotomic order: {0}")]
    InvalidOrder(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("size bound exceeded: {0}")]
    Size(String),

    #[error("degenerate lattice (determinant zero)")]
    DegenerateLattice,

    #[error("lattice is not even: diagonal entry {0} is odd")]
    NotEven(i64),

    #[error("degenerate form: {0}")]
    DegenerateForm(String),

    #[error("subgroup is not isotropic")]
    NotIsotropic,

    #[error("signature {0} is odd; only even signature is supported")]
    OddSignature(u8),

    #[error("matrix is not in SL2(Z): {0}")]
    NotInSl2(String),

    #[error("matrix is not unimodular modulo {0}")]
    NonUnimodular(u64),

    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),

    #[error("vector is not primitive")]
    NotPrimitive,

    #[error("vector has unit norm; use the rank-1 splitting")]
    UnitNorm,

    #[error("search exhausted: {0}")]
    NotFound(String),

    #[error("rank hypothesis not met: {0}")]
    Rank(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("certificate failed for element {index}: {reason}")]
    Certificate { index: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
