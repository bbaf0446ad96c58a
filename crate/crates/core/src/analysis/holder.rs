use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rotations::GraphSample;

/// Fitted slopes above one are reported as this cap (Lipschitz or better).
pub const BETA_CAP: f64 = 1.05;
const MIN_SCALE_SPAN: u32 = 6;

/// Largest `|ȳ − ȳ(base)|` found in one dyadic distance bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleMaximum {
    pub m: u32,
    pub distance: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub beta_hat: f64,
    /// Raw least-squares slope before capping.
    pub slope: f64,
    pub r_squared: f64,
    pub scales: (u32, u32),
    pub base_point: Vec<f64>,
    pub maxima: Vec<ScaleMaximum>,
}

/// Bin index `m` with `distance ∈ (2^{−m−1}, 2^{−m}]`, tolerant to rounding
/// at the bin edges.
fn bin(distance: f64) -> i64 {
    (-distance.log2() + 1e-9).ceil() as i64 - 1
}

/// Hölder exponent of `x̄ ↦ ȳ` at `base` from per-scale maxima over the
/// dyadic bins `2^{−a}..2^{−b}`.
pub fn holder_exponent(samples: &GraphSample, base: &[f64], scales: (u32, u32)) -> Result<HolderEstimate> {
    let (a, b) = scales;
    if b < a || b - a < MIN_SCALE_SPAN {
        return Err(Error::InsufficientScales(format!(
            "scale range {a}:{b} spans fewer than {MIN_SCALE_SPAN} octaves"
        )));
    }
    if base.len() != samples.dim {
        return Err(Error::Dimension {
            expected: samples.dim,
            got: base.len(),
        });
    }
    let tol = 1e-14 * (1.0 + linalg::norm(base));
    let y0 = samples
        .points
        .iter()
        .find(|p| linalg::dist(&p.x_bar, base) <= tol)
        .map(|p| p.y_bar.clone())
        .ok_or_else(|| Error::InvalidParameter(format!("base point {base:?} is not among the samples")))?;

    let mut best: Vec<Option<(f64, f64)>> = vec![None; (b - a + 1) as usize];
    for p in &samples.points {
        let d = linalg::dist(&p.x_bar, base);
        if d <= tol {
            continue;
        }
        let m = bin(d);
        if m < a as i64 || m > b as i64 {
            continue;
        }
        let inc = linalg::dist(&p.y_bar, &y0);
        let slot = &mut best[(m - a as i64) as usize];
        if slot.is_none_or(|(_, v)| inc > v) {
            *slot = Some((d, inc));
        }
    }
    let mut maxima = Vec::with_capacity(best.len());
    for (off, slot) in best.iter().enumerate() {
        let m = a + off as u32;
        let (distance, increment) =
            slot.ok_or_else(|| Error::InsufficientScales(format!("no samples at scale 2^-{m}")))?;
        maxima.push(ScaleMaximum { m, distance, increment });
    }

    let (slope, r_squared) = if maxima.iter().all(|s| s.increment == 0.0) {
        (f64::INFINITY, 1.0)
    } else if maxima.iter().any(|s| s.increment == 0.0) {
        return Err(Error::InsufficientScales("zero increment at some scales".into()));
    } else {
        let xs: Vec<f64> = maxima.iter().map(|s| s.distance.ln()).collect();
        let ys: Vec<f64> = maxima.iter().map(|s| s.increment.ln()).collect();
        least_squares(&xs, &ys)
    };
    Ok(HolderEstimate {
        beta_hat: slope.clamp(f64::MIN_POSITIVE, BETA_CAP),
        slope,
        r_squared,
        scales,
        base_point: base.to_vec(),
        maxima,
    })
}

/// Slope and coefficient of determination of the line fit `y ~ x`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, r2)
}
