//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Binary series operation on operands with different colour count or truncation.
    #[error("mismatched series context: (n={left_n}, trunc={left_trunc}) vs (n={right_n}, trunc={right_trunc})")]
    MismatchedContext {
        left_n: usize,
        left_trunc: i64,
        right_n: usize,
        right_trunc: i64,
    },

    /// Pochhammer argument with negative q-exponent.
    #[error("divergent product: argument monomial has q-exponent {0} < 0")]
    DivergentProduct(i64),

    /// A substitution cannot be performed exactly at the requested output order.
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    /// Monomial outside the monoid generated by e^{-alpha_0}, ..., e^{-alpha_{n-1}}.
    #[error("monomial not convertible to the alpha basis: {0}")]
    NotAlphaConvertible(String),

    #[error("crystal label {label} out of range for n = {n}")]
    IndexOutOfRange { n: usize, label: usize },

    /// Closed-form crystal data requested for a rank where it does not apply.
    #[error("unsupported rank n = {0} for this operation")]
    UnsupportedRank(usize),

    /// Two propagation paths assigned different energies to one vertex.
    #[error("inconsistent energy at vertex {vertex}: {existing} vs {candidate}")]
    InconsistentEnergy {
        vertex: String,
        existing: i64,
        candidate: i64,
    },

    /// The pair graph did not reach every vertex from the ground.
    #[error("pair graph disconnected: reached {reached} of {total} vertices")]
    Disconnected { reached: usize, total: usize },

    #[error("bad path: {0}")]
    BadPath(String),

    #[error("not a grounded partition: {0}")]
    NotGrounded(String),

    #[error("invalid Capparelli spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
