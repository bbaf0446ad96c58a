//! The singular Hamiltonian stationary family `u⁽ⁿ'ᵏ⁾`.
//!
//! Near the origin the family is the `π/4` upward rotation of an
//! axisymmetric solution `w(r, t)` of `Δ_g Θ = 0` with Cauchy data
//! `w(r, 0) = r²/2 − r^{2k+2}`, `w_tt(r, 0) = −2r²` and vanishing odd
//! t-derivatives. [`ModelPotential`] keeps the terms through `t²`;
//! [`cauchy_jet_solve`] continues the expansion to a finite order.

mod graph;
mod jet;
mod model;
mod residual;

use serde::Serialize;

use crate::error::{Error, Result};

pub use graph::{axis_image_sample, phi, singular_graph_sample};
pub use jet::{cauchy_jet_solve, cauchy_jet_solve_in, JetSolution, Pivot, MAX_JET_ORDER};
pub use model::{
    default_radius, eigen_bound_violation, model_potential, validated_radius, ModelPotential, DEFAULT_RADIUS,
    MAX_RADIUS,
};
pub use residual::{axisym_phase_laplacian, reexpand};

/// Dimension and Hölder index of a member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyIndex {
    pub n: usize,
    pub k: usize,
}

impl FamilyIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("family needs n >= 3, got {n}")));
        }
        if k < 1 {
            return Err(Error::InvalidParameter("family needs k >= 1".into()));
        }
        Ok(Self { n, k })
    }

    /// `1/(2k+1)`.
    pub fn holder_exponent(&self) -> f64 {
        1.0 / (2 * self.k + 1) as f64
    }

    /// Phase of the rotated graph at the origin, `(2n−1)π/4`.
    pub fn theta_bar_origin(&self) -> f64 {
        (2 * self.n - 1) as f64 * std::f64::consts::FRAC_PI_4
    }
}
