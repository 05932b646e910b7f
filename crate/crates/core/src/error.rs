//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Layout construction rejected the given dimensions or labels.
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A state failed its defining invariants (norm, Hermiticity, trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An operator failed its defining invariants (unitarity, idempotence, POVM closure).
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// Subsystem index outside the layout.
    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    /// A partition argument was empty, overlapping, or incomplete.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Post-selection on an outcome of (numerically) zero probability.
    #[error("zero-probability outcome: {0}")]
    ZeroProbability(String),

    /// The requested scenario exceeds the dense dimension budget.
    #[error("dimension budget exceeded: {qubits} qubits requested, budget is {budget}")]
    BudgetExceeded { qubits: usize, budget: usize },

    /// A scalar parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
