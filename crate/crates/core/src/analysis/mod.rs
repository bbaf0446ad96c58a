//! Quantitative checks on gradient graphs: Hölder exponents, dyadic shell
//! probes for singular integrals, Sobolev membership of the singular family
//! and the weak-form residual of the Hamiltonian stationary equation.

mod holder;
mod probe;
mod quadrature;
mod weak;

pub use holder::{holder_exponent, HolderEstimate, ScaleMaximum, BETA_CAP};
pub use probe::{
    integrability_probe, integrability_probe_with, integrability_threshold, sobolev_membership,
    sobolev_membership_with, sobolev_threshold, ProbeOptions, ProbeResult, ShellSum, SobolevReport, Verdict,
};
pub use quadrature::GaussLegendre;
pub use weak::{weak_residual, QuadratureGrid, TestFunction};
