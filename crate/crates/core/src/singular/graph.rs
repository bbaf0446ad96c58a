use std::f64::consts::FRAC_PI_4;

use super::FamilyIndex;
use crate::error::{Error, Result};
use crate::geometry::{AxisymPolynomial, PotentialField};
use crate::linalg;
use crate::parallel::{self, Strategy};
use crate::rotations::{injectivity_check, GraphPoint, GraphSample};

const INJECTIVITY_PAIRS: usize = 2000;

/// `Φ(x) = (x − Dw(x), x + Dw(x))`, the rescaled `π/4` rotation.
pub fn phi(w: &dyn PotentialField, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dw = w.gradient(x);
    let xb = x.iter().zip(dw.iter()).map(|(a, b)| a - b).collect();
    let yb = x.iter().zip(dw.iter()).map(|(a, b)| a + b).collect();
    (xb, yb)
}

/// `Θ̄ = Σ (arctan λᵢ + π/4)`; each rotated angle stays below `π/2` because
/// `λᵢ < 1`.
fn theta_bar(w: &dyn PotentialField, x: &[f64]) -> f64 {
    linalg::sym_eigenvalues(&w.hessian(x))
        .iter()
        .map(|l| l.atan() + FRAC_PI_4)
        .sum()
}

/// `Φ` through the deficit `d = |x|²/2 − w`: `x̄ = Dd`, `ȳ = 2x − Dd`, so
/// `x̄` carries full relative precision where `Dw ≈ x`.
fn graph_point(w: &AxisymPolynomial, deficit: &AxisymPolynomial, x: &[f64]) -> GraphPoint {
    let x_bar: Vec<f64> = deficit.gradient(x).iter().copied().collect();
    let y_bar = x.iter().zip(&x_bar).map(|(a, b)| 2.0 * a - b).collect();
    GraphPoint {
        x_bar,
        y_bar,
        theta_bar: theta_bar(w, x),
    }
}

fn check_dim(idx: FamilyIndex, w: &dyn PotentialField) -> Result<()> {
    if w.dim() != idx.n {
        return Err(Error::Dimension {
            expected: idx.n,
            got: w.dim(),
        });
    }
    Ok(())
}

/// Samples the graph of `u⁽ⁿ'ᵏ⁾` over `points` (preimage coordinates).
///
/// Every point must lie in the source's ball, and the `π/4` rotation is
/// certified on the sample with the origin as the only exception.
pub fn singular_graph_sample(
    idx: FamilyIndex,
    w: &AxisymPolynomial,
    points: &[Vec<f64>],
    strategy: Strategy,
) -> Result<GraphSample> {
    check_dim(idx, w)?;
    let rho = w.radius();
    if let Some(p) = points.iter().find(|p| p.len() != idx.n || linalg::norm(p) > rho * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "sample point {p:?} outside the validated ball of radius {rho}"
        )));
    }
    let cert = injectivity_check(w, points, &[vec![0.0; idx.n]], INJECTIVITY_PAIRS, 0, strategy);
    if !cert.passed {
        return Err(Error::InjectivityFailed(format!(
            "max lambda {:.6} off the origin; eigen witness {:?}, monotonicity witness {:?}",
            cert.max_lambda, cert.eigen_witness, cert.monotonicity_witness
        )));
    }
    let deficit = w.identity_deficit();
    let pts = parallel::map_slice(points, strategy, |x| graph_point(w, &deficit, x));
    Ok(GraphSample {
        dim: idx.n,
        points: pts,
    })
}

/// Samples the image of the `x₁`-axis with `|x̄₁|` covering the dyadic
/// scales `2^{−a}..2^{−b}`, `per_scale` points per scale, plus the origin
/// as the first point.
///
/// The axis may extend past the model's ball: the largest eigenvalue and the
/// monotonicity of `r ↦ x̄₁(r)` are checked along the axis itself.
pub fn axis_image_sample(
    idx: FamilyIndex,
    w: &AxisymPolynomial,
    scales: (u32, u32),
    per_scale: usize,
) -> Result<GraphSample> {
    check_dim(idx, w)?;
    let (a, b) = scales;
    if b <= a || per_scale == 0 {
        return Err(Error::InsufficientScales(format!("empty scale range {a}:{b}")));
    }
    let n = idx.n;
    let axis = |r: f64| {
        let mut x = vec![0.0; n];
        x[0] = r;
        x
    };
    let deficit = w.identity_deficit();
    let xbar = |r: f64| deficit.gradient(&axis(r))[0];
    // certified axis segment: λ_min(I − D²w) > 0 keeps r ↦ x̄₁ strictly increasing
    const STEPS: usize = 4096;
    const AXIS_MAX: f64 = 1.0;
    let mut r_lim = AXIS_MAX;
    let mut prev = 0.0;
    for s in 1..=STEPS {
        let r = AXIS_MAX * s as f64 / STEPS as f64;
        let gap = linalg::sym_eigenvalues(&deficit.hessian(&axis(r)))[0];
        let xb = xbar(r);
        if gap <= 0.0 || xb <= prev {
            r_lim = AXIS_MAX * (s - 1) as f64 / STEPS as f64;
            break;
        }
        prev = xb;
    }
    let reach = xbar(r_lim);
    let top = 2f64.powi(-(a as i32));
    if reach < top {
        return Err(Error::InsufficientScales(format!(
            "axis image reaches |x̄| = {reach:.3e} < 2^-{a}"
        )));
    }
    let invert = |target: f64| {
        let (mut lo, mut hi) = (0.0, r_lim);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if xbar(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut points = vec![graph_point(w, &deficit, &axis(0.0))];
    for m in a..=b {
        for q in 0..per_scale {
            // geometric points in (2^{−m−1}, 2^{−m}]
            let target = 2f64.powf(-(m as f64) - q as f64 / per_scale as f64);
            points.push(graph_point(w, &deficit, &axis(invert(target))));
        }
    }
    Ok(GraphSample { dim: n, points })
}
