use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

/// Profile derivatives of an axisymmetric potential `u(x', xₙ) = v(|x'|, xₙ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisymPoint {
    pub n: usize,
    pub r: f64,
    pub t: f64,
    /// `v_r / r`; on the axis the caller supplies the limit `v_rr(0, t)`.
    pub vr_over_r: Option<f64>,
    pub vrr: f64,
    pub vrt: f64,
    pub vtt: f64,
}

const AXIS_LIMIT_TOLERANCE: f64 = 1e-8;

/// Hessian spectrum of an axisymmetric potential: `v_r/r` with multiplicity
/// `n − 2` together with the two eigenvalues of the profile Hessian
/// `[[v_rr, v_rt], [v_rt, v_tt]]`, sorted ascending.
pub fn axisym_eigen(p: &AxisymPoint) -> Result<Vec<f64>> {
    if p.n < 2 {
        return Err(Error::InvalidParameter(format!("n = {} < 2", p.n)));
    }
    if !(p.r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius {} is negative", p.r)));
    }
    let mu = match p.vr_over_r {
        Some(mu) => mu,
        None if p.r == 0.0 => return Err(Error::AxisWithoutLimit),
        None => return Err(Error::InvalidParameter("v_r/r missing off the axis".into())),
    };
    if p.r == 0.0 && (mu - p.vrr).abs() > AXIS_LIMIT_TOLERANCE * p.vrr.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "axis limit v_r/r = {mu} disagrees with v_rr = {}",
            p.vrr
        )));
    }
    let (lo, hi) = linalg::eig2_sym(p.vrr, p.vrt, p.vtt);
    let mut out = vec![mu; p.n - 2];
    out.push(lo);
    out.push(hi);
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Dense `n × n` Hessian at the point `(r·ω, t)` for a unit direction `ω`
/// in the `x'`-plane.
pub fn assemble_axisym_hessian(p: &AxisymPoint, direction: &[f64]) -> Result<DMatrix<f64>> {
    let m = p.n - 1;
    if direction.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: direction.len(),
        });
    }
    let mu = p.vr_over_r.ok_or(Error::AxisWithoutLimit)?;
    let len = linalg::norm(direction);
    let w: Vec<f64> = direction.iter().map(|d| d / len).collect();
    Ok(DMatrix::from_fn(p.n, p.n, |i, j| match (i < m, j < m) {
        (true, true) => {
            let d = if i == j { mu } else { 0.0 };
            d + (p.vrr - mu) * w[i] * w[j]
        }
        (true, false) => p.vrt * w[i],
        (false, true) => p.vrt * w[j],
        (false, false) => p.vtt,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AxisymPolynomial, FieldKind, PotentialField};

    #[test]
    fn half_r_squared_in_five_dimensions() {
        let p = AxisymPoint {
            n: 5,
            r: 0.3,
            t: 0.0,
            vr_over_r: Some(1.0),
            vrr: 1.0,
            vrt: 0.0,
            vtt: 0.0,
        };
        assert_eq!(axisym_eigen(&p).unwrap(), vec![0.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn model_radial_eigenvalue() {
        let w = AxisymPolynomial::new(
            3,
            0.2,
            FieldKind::Model { n: 3, k: 1 },
            vec![(1, 0, 0.5), (2, 0, -1.0), (1, 2, -1.0)],
        )
        .unwrap();
        let p = w.axis_point(0.1, 0.0);
        assert!((p.vr_over_r.unwrap() - 0.96).abs() < 1e-15);
        let e = axisym_eigen(&p).unwrap();
        assert!(e.iter().any(|v| (v - 0.96).abs() < 1e-15));
        let dense = linalg::sym_eigenvalues(&w.hessian(&[0.1, 0.0, 0.0]));
        for (a, b) in e.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_requires_limit() {
        let p = AxisymPoint {
            n: 3,
            r: 0.0,
            t: 0.1,
            vr_over_r: None,
            vrr: 1.0,
            vrt: 0.0,
            vtt: 0.0,
        };
        assert_eq!(axisym_eigen(&p), Err(Error::AxisWithoutLimit));
        let ok = AxisymPoint {
            vr_over_r: Some(1.0),
            ..p
        };
        assert_eq!(axisym_eigen(&ok).unwrap().len(), 3);
        let bad = AxisymPoint {
            vr_over_r: Some(0.5),
            ..p
        };
        assert!(axisym_eigen(&bad).is_err());
    }

    #[test]
    fn two_dimensions_has_no_repeated_eigenvalue() {
        let p = AxisymPoint {
            n: 2,
            r: 0.5,
            t: 0.0,
            vr_over_r: Some(7.0),
            vrr: 2.0,
            vrt: 0.0,
            vtt: -1.0,
        };
        assert_eq!(axisym_eigen(&p).unwrap(), vec![-1.0, 2.0]);
    }
}
