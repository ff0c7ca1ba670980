use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands disagree on qubit count or cut size.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Input outside the domain of a formula (bad N, N_A, epsilon, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A generator set violates the stabilizer-state contract.
    #[error("invalid stabilizer state: {0}")]
    Contract(String),
    /// Pauli-string or rational-string parse failure.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
