use nalgebra::{DMatrix, DVector};

use super::FamilyIndex;
use crate::error::{Error, Result};
use crate::geometry::{AxisymPolynomial, FieldKind, PotentialField, Tensor3};
use crate::linalg;

pub const DEFAULT_RADIUS: f64 = 0.2;
pub const MAX_RADIUS: f64 = 0.3;
const BOUND_SLACK: f64 = 1e-12;

/// `w(r, t) = r²/2 − r^{2k+2} − t²r²` on `B_ρ ⊂ ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPotential {
    index: FamilyIndex,
    field: AxisymPolynomial,
}

/// Model potential on `B_ρ`; rejects `ρ > 0.3`.
pub fn model_potential(idx: FamilyIndex, rho: f64) -> Result<ModelPotential> {
    if !(rho > 0.0) || rho > MAX_RADIUS {
        return Err(Error::InvalidParameter(format!(
            "model radius {rho} outside (0, {MAX_RADIUS}]"
        )));
    }
    let field = AxisymPolynomial::new(
        idx.n,
        rho,
        FieldKind::Model { n: idx.n, k: idx.k },
        vec![(1, 0, 0.5), (idx.k + 1, 0, -1.0), (1, 2, -1.0)],
    )?;
    Ok(ModelPotential { index: idx, field })
}

impl ModelPotential {
    pub fn index(&self) -> FamilyIndex {
        self.index
    }

    pub fn field(&self) -> &AxisymPolynomial {
        &self.field
    }

    pub fn into_field(self) -> AxisymPolynomial {
        self.field
    }

    /// `|x|²/2 − w`, whose Hessian is `I − D²w` without cancellation.
    pub fn deficit(&self) -> AxisymPolynomial {
        self.field.identity_deficit()
    }
}

impl PotentialField for ModelPotential {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn kind(&self) -> FieldKind {
        self.field.kind()
    }
    fn radius(&self) -> f64 {
        self.field.radius()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.field.value(x)
    }
    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        self.field.gradient(x)
    }
    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        self.field.hessian(x)
    }
    fn third(&self, x: &[f64]) -> Option<Tensor3> {
        self.field.third(x)
    }
}

/// Largest violation at `(r, t)` of the two eigenvalue bounds
/// `w_r/r ≤ 1 − (2k+2)r^{2k} − t²` and
/// `λ_{n−1} ≤ 1 − (2k+2)(2k+1)r^{2k} − t²`; nonpositive when both hold.
pub fn eigen_bound_violation(idx: FamilyIndex, w: &AxisymPolynomial, r: f64, t: f64) -> f64 {
    let k = idx.k as f64;
    let p = w.axis_point(r, t);
    let r2k = r.powi(2 * idx.k as i32);
    let mu = p.vr_over_r.unwrap_or(p.vrr);
    let (_, hi) = linalg::eig2_sym(p.vrr, p.vrt, p.vtt);
    let e1 = mu - (1.0 - (2.0 * k + 2.0) * r2k - t * t);
    let e2 = hi - (1.0 - (2.0 * k + 2.0) * (2.0 * k + 1.0) * r2k - t * t);
    e1.max(e2) - BOUND_SLACK
}

/// Largest `ρ ≤ 0.3` such that both eigenvalue bounds hold on a polar
/// verification grid of the profile half-disk of radius `ρ`.
pub fn validated_radius(idx: FamilyIndex) -> f64 {
    let w = model_potential(idx, MAX_RADIUS).expect("max radius is valid").into_field();
    const RADIAL: usize = 600;
    const ANGULAR: usize = 181;
    let mut limit = MAX_RADIUS;
    for ia in 0..ANGULAR {
        // t ≥ 0 suffices: the model is even in t
        let th = std::f64::consts::FRAC_PI_2 * ia as f64 / (ANGULAR - 1) as f64;
        for ir in 1..=RADIAL {
            let rho = MAX_RADIUS * ir as f64 / RADIAL as f64;
            if rho >= limit {
                break;
            }
            if eigen_bound_violation(idx, &w, rho * th.cos(), rho * th.sin()) > 0.0 {
                limit = rho - MAX_RADIUS / RADIAL as f64;
                break;
            }
        }
    }
    limit
}

/// `min(0.2, 0.9·ρ_v)` with `ρ_v` from [`validated_radius`].
pub fn default_radius(idx: FamilyIndex) -> f64 {
    DEFAULT_RADIUS.min(0.9 * validated_radius(idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_value() {
        let w = model_potential(FamilyIndex::new(3, 1).unwrap(), 0.2).unwrap();
        assert!((w.value(&[0.1, 0.0, 0.1]) - 0.0048).abs() < 1e-15);
        let e = linalg::sym_eigenvalues(&w.hessian(&[0.0; 3]));
        assert_eq!(e, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn radius_guard() {
        let idx = FamilyIndex::new(3, 1).unwrap();
        assert!(model_potential(idx, 0.31).is_err());
        assert!(model_potential(idx, 0.0).is_err());
    }

    #[test]
    fn cauchy_traces_of_model() {
        let idx = FamilyIndex::new(4, 2).unwrap();
        let w = model_potential(idx, 0.2).unwrap().into_field();
        for r in [0.0, 0.05, 0.13] {
            let s = r * r;
            assert_eq!(w.partial(0, 0, s, 0.0), s / 2.0 - s.powi(3));
            assert_eq!(w.partial(0, 1, s, 0.0), 0.0);
            assert_eq!(w.partial(0, 2, s, 0.0), -2.0 * s);
            assert_eq!(w.partial(0, 3, s, 0.0), 0.0);
        }
    }

    #[test]
    fn validated_radius_brackets() {
        for k in 1..=3 {
            let idx = FamilyIndex::new(3, k).unwrap();
            let rv = validated_radius(idx);
            assert!(rv > 0.15 && rv <= MAX_RADIUS, "k={k}: {rv}");
            let w = model_potential(idx, MAX_RADIUS).unwrap().into_field();
            for i in 0..50 {
                let th = i as f64 / 49.0 * std::f64::consts::FRAC_PI_2;
                let rho = rv * 0.999;
                assert!(eigen_bound_violation(idx, &w, rho * th.cos(), rho * th.sin()) <= 0.0);
            }
        }
    }
}
