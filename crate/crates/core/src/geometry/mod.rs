//! Pointwise quantities of a Lagrangian gradient graph `{(x, Du(x))}`:
//! Hessian spectrum, phase, induced metric, phase gradient and the
//! axisymmetric eigenvalue reduction.

mod axisym;
mod phase;
mod potential;

pub use axisym::{assemble_axisym_hessian, axisym_eigen, AxisymPoint};
pub use phase::{classify, phase_and_eigen, phase_gradient, Criticality, PhaseReport, SYMMETRY_TOLERANCE};
pub use potential::{
    AxisymPolynomial, FieldKind, GridSampled, HarmonicCubic, PotentialField, Quadratic, Tensor3,
};

/// Phase `Θ(x)` of a potential at a point.
pub fn theta_at(u: &dyn PotentialField, x: &[f64]) -> f64 {
    crate::linalg::sym_eigenvalues(&u.hessian(x))
        .iter()
        .map(|l| l.atan())
        .sum()
}
