use thiserror::Error;

/// Errors raised by the cloning engine, the estimation bounds and the Fock oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An N→M cloner with fewer outputs than inputs was requested.
    #[error("invalid cloner: {n} -> {m} (output count must be >= input count)")]
    InvalidCloner { n: u32, m: String },

    /// Two cloners whose copy counts do not line up were chained.
    #[error(
        "cannot cascade {first} with {second}: output count {produced} != input count {expected}"
    )]
    Composition {
        first: String,
        second: String,
        produced: String,
        expected: u32,
    },

    /// A numeric argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs that are individually valid but inconsistent with each other,
    /// e.g. a coherent center paired with anisotropic noise.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The Fock cutoff is too small to hold the state within tolerance.
    #[error(
        "truncation error at cutoff {cutoff}: norm deficit {deficit:.3e} exceeds {tolerance:.3e}"
    )]
    Truncation {
        cutoff: usize,
        deficit: f64,
        tolerance: f64,
    },

    /// Operands live in Fock spaces of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
