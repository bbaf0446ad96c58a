//! Numerical toolkit for Hamiltonian stationary Lagrangian gradient graphs.
//!
//! * [`jets`]: truncated bivariate power series, the kernel of the jet solver.
//! * [`geometry`]: phase, metric and Hessian spectra of gradient graphs.
//! * [`rotations`]: upward and downward rotations of gradient graphs.
//! * [`singular`]: the model potential, the Cauchy jet solve and the rotated
//!   singular graphs with Hölder exponent `1/(2k+1)`.
//! * [`analysis`]: Hölder estimation, singular-integral probes, Sobolev
//!   membership and the weak-form residual.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod jets;
mod linalg;
pub mod parallel;
pub mod rotations;
pub mod sampling;
pub mod singular;

pub use error::{Error, Result};
pub use parallel::Strategy;

/// Dense symmetric helpers used across modules.
pub mod dense {
    pub use crate::linalg::{eig2_sym, sym_eigen_sorted, sym_eigenvalues, sym_operator_norm};
}
