//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the half-line toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// The ordering triple does not satisfy `j1 + j2 + j3 = 1`.
    #[error("ordering constraint violated: j1 + j2 + j3 = {sum}, must be 1 within {tol:e}")]
    ConstraintViolation { sum: f64, tol: f64 },

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A wave function was supplied in the wrong representation.
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    /// Two orderings with different `J+` cannot be conjugated into each other.
    #[error("incompatible orderings: J+ = {a} vs {b}")]
    IncompatibleOrderings { a: f64, b: f64 },

    /// Evaluation at (or too close to) a pole of a special function.
    #[error("pole: {0}")]
    Pole(String),

    /// A series did not converge within the allowed number of terms.
    #[error("no convergence after {max_terms} terms (last |term|/|sum| = {ratio:.3e})")]
    NoConvergence { max_terms: usize, ratio: f64 },

    /// Operation refused for this factor-ordering regime or boundary condition.
    #[error("regime gate: {0}")]
    Regime(String),

    /// Kinetic application method does not support the requested boundary condition.
    #[error("method mismatch: {0}")]
    MethodMismatch(String),

    /// Least-squares fit could not resolve the requested quantities.
    #[error("fit degenerate: {0}")]
    FitDegenerate(String),

    /// Boundary-limit extrapolation did not settle.
    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),

    /// Spectral basis cannot represent the state.
    #[error("basis too small: projection residual {residual:.3e}")]
    BasisTooSmall { residual: f64 },

    /// Request is outside what this artifact implements.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Generic numerical failure.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
