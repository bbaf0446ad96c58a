use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::potential::Tensor3;
use crate::error::{Error, Result};
use crate::linalg;

/// Input symmetry tolerance (loose enough for grid-sampled Hessians).
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
    Hypercritical,
}

/// Classifies `|Θ|` against the critical phase `(n−2)π/2`.
///
/// Checked from the strongest class down, with closed intervals:
/// hypercritical at `(n−1)π/2`; supercritical at `(n−2)π/2 + δ` provided the
/// phase is strictly above critical (so `δ = 0` does not swallow the
/// critical level itself); critical at `(n−2)π/2`.
pub fn classify(theta: f64, n: usize, delta: f64) -> Criticality {
    let a = theta.abs();
    let crit = (n as f64 - 2.0) * FRAC_PI_2;
    let hyper = (n as f64 - 1.0) * FRAC_PI_2;
    if a >= hyper - TIE {
        Criticality::Hypercritical
    } else if a >= crit + delta - TIE && a > crit + TIE {
        Criticality::Supercritical
    } else if a >= crit - TIE {
        Criticality::Critical
    } else {
        Criticality::Subcritical
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Pointwise phase and metric data of a gradient graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub eigenvalues: Vec<f64>,
    pub theta: f64,
    #[serde(serialize_with = "ser_matrix")]
    pub metric: DMatrix<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub metric_inv: DMatrix<f64>,
    pub sqrt_det_g: f64,
    #[serde(rename = "class")]
    pub criticality: Criticality,
    pub delta: f64,
}

fn ser_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    matrix_rows(m).serialize(s)
}

/// Eigenvalues, phase `Θ = Σ arctan λᵢ`, metric `g = I + H²` and the phase
/// class of a symmetric Hessian `H`.
pub fn phase_and_eigen(h: &DMatrix<f64>, delta: f64) -> Result<PhaseReport> {
    if !h.is_square() {
        return Err(Error::Dimension {
            expected: h.nrows(),
            got: h.ncols(),
        });
    }
    let asym = linalg::asymmetry(h);
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric {
            asymmetry: asym,
            tolerance: SYMMETRY_TOLERANCE,
        });
    }
    if delta < 0.0 {
        return Err(Error::InvalidParameter(format!("margin delta = {delta} < 0")));
    }
    let h = linalg::symmetrize(h);
    let n = h.nrows();
    let (eigenvalues, vecs) = linalg::sym_eigen_sorted(&h);
    let theta: f64 = eigenvalues.iter().map(|l| l.atan()).sum();
    let metric = DMatrix::identity(n, n) + &h * &h;
    let inv_diag = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        eigenvalues.iter().map(|l| 1.0 / (1.0 + l * l)),
    ));
    let metric_inv = &vecs * inv_diag * vecs.transpose();
    let sqrt_det_g = eigenvalues.iter().map(|l| (1.0 + l * l).sqrt()).product();
    Ok(PhaseReport {
        criticality: classify(theta, n, delta),
        eigenvalues,
        theta,
        metric,
        metric_inv,
        sqrt_det_g,
        delta,
    })
}

/// Ambient phase gradient `∂ⱼΘ = g^{ab} u_{abj}`.
///
/// The intrinsic gradient in graph coordinates is `g⁻¹ · DΘ`.
pub fn phase_gradient(h: &DMatrix<f64>, third: &Tensor3) -> DVector<f64> {
    let n = h.nrows();
    let g = DMatrix::identity(n, n) + h * h;
    let g_inv = g
        .cholesky()
        .expect("I + H² is positive definite")
        .inverse();
    third.contract_pair(&g_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_hessian_in_three_dimensions() {
        let r = phase_and_eigen(&DMatrix::identity(3, 3), 0.0).unwrap();
        assert!((r.theta - 3.0 * PI / 4.0).abs() < 1e-15);
        assert_eq!(r.criticality, Criticality::Supercritical);
        let r = phase_and_eigen(&DMatrix::identity(3, 3), PI / 4.0).unwrap();
        assert_eq!(r.criticality, Criticality::Supercritical);
        let r = phase_and_eigen(&DMatrix::identity(3, 3), 0.8).unwrap();
        assert_eq!(r.criticality, Criticality::Critical);
    }

    #[test]
    fn critical_boundary() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0]));
        let r = phase_and_eigen(&h, 0.0).unwrap();
        assert!((r.theta - PI / 2.0).abs() < 1e-15);
        assert_eq!(r.criticality, Criticality::Critical);
    }

    #[test]
    fn hypercritical_and_subcritical() {
        assert_eq!(classify(PI, 3, 0.0), Criticality::Hypercritical);
        assert_eq!(classify(-3.2, 3, 0.1), Criticality::Hypercritical);
        assert_eq!(classify(0.3, 3, 0.0), Criticality::Subcritical);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 1e-6, 0.0, 1.0]);
        assert!(matches!(phase_and_eigen(&h, 0.0), Err(Error::Asymmetric { .. })));
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 1e-10, 0.0, 1.0]);
        assert!(phase_and_eigen(&h, 0.0).is_ok());
    }

    #[test]
    fn metric_and_area_element() {
        let h = DMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.2, -1.0]);
        let r = phase_and_eigen(&h, 0.0).unwrap();
        let g = DMatrix::identity(2, 2) + &h * &h;
        assert!((&r.metric - &g).abs().max() < 1e-14);
        assert!((&r.metric * &r.metric_inv - DMatrix::identity(2, 2)).abs().max() < 1e-13);
        assert!((r.sqrt_det_g - g.determinant().sqrt()).abs() < 1e-13);
    }

    #[test]
    fn scalar_chain_rule() {
        let h = DMatrix::from_element(1, 1, 0.5);
        let mut t = Tensor3::zeros(1);
        t.set_sym(0, 0, 0, 1.0);
        let g = phase_gradient(&h, &t);
        assert!((g[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn report_json_is_flat() {
        let r = phase_and_eigen(&DMatrix::identity(2, 2), 0.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["class"], "hypercritical");
        assert_eq!(v["metric"][0][0], 2.0);
        assert!(v["eigenvalues"].is_array());
    }
}
