//! Error type shared by all modules.

use alloc::string::String;
use thiserror::Error;

/// Errors reported by state constructors and numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Occupation label outside the fixed-N sector.
    #[error("occupation {k} outside the sector 0..={n_total}")]
    InvalidLabel { k: usize, n_total: usize },

    /// A scalar argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The 2x2 mode-mixing matrix of a bipartition is not unitary.
    #[error("mode mixing is not unitary (deviation {deviation:.3e})")]
    InvalidBipartition { deviation: f64 },

    /// A density matrix violating Hermiticity, unit trace or positivity.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// The operation requires the state in a different bipartition basis.
    #[error("state is expressed in the '{found}' basis, expected '{required}'")]
    BasisMismatch { required: String, found: String },

    /// The ODE backend could not reach the requested accuracy.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// Quadrature did not converge within the node cap.
    #[error("quadrature did not converge at {max_nodes} nodes (residual {residual:.3e})")]
    QuadratureFailure { max_nodes: usize, residual: f64 },

    /// The squeezing parameter is undefined because the mean spin vanishes.
    #[error("squeezing undefined: |<J_n3>| = {mean:.3e} is below the threshold")]
    UndefinedSqueezing { mean: f64 },

    /// The initial state is already squeezed, so the no-squeezing bound
    /// does not apply.
    #[error("premise violated: minimum squeezing parameter {min_xi} < 1")]
    PremiseViolation { min_xi: f64 },

    /// A numerical kernel failed (eigensolver non-convergence and the like).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = core::result::Result<T, Error>;
