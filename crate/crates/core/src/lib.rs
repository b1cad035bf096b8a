//! Entropy-stable HLL-type interface fluxes for one-dimensional hyperbolic
//! conservation laws.
//!
//! Every interface flux has the form
//!
//! ```text
//! f*ES = f*EC(qL, qR) - 1/2 D H [[v]]
//! ```
//!
//! where `f*EC` is an entropy-conservative two-point flux, `v` are the entropy
//! variables, `H = dq/dv` is the entropy Jacobian at an averaged state and `D`
//! is one of the dissipation operators in [`dissipation`]. None of the
//! operators need the eigenvectors of the flux Jacobian; the hybrid kinds only
//! use the fastest signal speeds and (for the Lax-Wendroff part) the Jacobian
//! applied twice.
//!
//! Two equation systems ship with the crate: inviscid Burgers and 1D ideal MHD
//! (see [`systems`]).

pub mod audit;
pub mod dissipation;
pub mod ec_flux;
mod error;
pub mod solver;
pub mod systems;

pub use error::SolverError;

use nalgebra::{SMatrix, SVector};

/// Conserved (or flux, or entropy-variable) vector of an `N`-variable system.
pub type State<const N: usize> = SVector<f64, N>;

/// Square `N x N` matrix.
pub type Matrix<const N: usize> = SMatrix<f64, N, N>;
