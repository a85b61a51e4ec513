//! Numerical toolkit for the factor-ordered family of half-line
//! Hamiltonians
//!
//! ```text
//! H = −ħ² d²/dy² + ħ² (J+² − 1/4) / y² + (Λ/4) y²   on L²(ℝ⁺, dy).
//! ```
//!
//! The crate classifies orderings by the self-adjointness regime of `H`,
//! builds the boundary-condition machinery of the `|J+| < 1` extensions
//! (reference modes, deficiency solutions, the θ/L/β dictionary), evaluates
//! the closed-form Dirichlet/Neumann/Robin heat and Schrödinger kernels,
//! propagates states by time-sliced splitting in real and imaginary time,
//! cross-checks everything against spectral oracles, and realizes the
//! absorbed ("avoiding") and reflected ("reflecting") path measures by
//! Monte Carlo.

pub mod error;
pub mod evolve;
pub mod extensions;
pub mod kernels;
pub mod mcpaths;
pub mod numerics;
pub mod ordering;
pub mod specfun;
pub mod spectral;
pub mod wavefunction;

pub use error::{Error, Result};
pub use ordering::{classify, effective_potential, similarity_exponent, OrderingInfo,
                   PhysicalConstants, Regime};
pub use wavefunction::{from_flat, to_flat, Representation, WaveFunction};
