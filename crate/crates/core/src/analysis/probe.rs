use std::fmt::Write as _;

use serde::Serialize;

use super::holder::least_squares;
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::linalg;
use crate::parallel::{self, Strategy};
use crate::singular::{model_potential, FamilyIndex, MAX_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Integral over the shell `2^{−m−1} ≤ |x| < 2^{−m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellSum {
    pub m: u32,
    pub scale: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub verdict: Verdict,
    pub shell_sums: Vec<ShellSum>,
    /// Least-squares slope of `log₂(shell sum)` against `m`.
    pub fitted_decay: f64,
    pub margin: f64,
}

impl ProbeResult {
    /// CSV with header `m,sum`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,sum\n");
        for sh in &self.shell_sums {
            let _ = writeln!(s, "{},{:e}", sh.m, sh.sum);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    pub m_min: u32,
    pub m_max: u32,
    /// Verdict margin in log₂ units.
    pub margin: f64,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    pub strategy: Strategy,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            m_min: 2,
            m_max: 20,
            margin: 0.1,
            nodes: 16,
            strategy: Strategy::default(),
        }
    }
}

/// Shell integrals of an axisymmetric integrand `f(r, s)`, `r = |x'|`,
/// `s = |xₙ|`, in polar coordinates `(ρ, θ)` of the quarter plane with the
/// weight `r^{n−2}` (sphere constants dropped).
///
/// The angular integral is split at `θ_c = arctan ρ^{k−1}`, the edge of the
/// region `s ≲ r^k`, and continued on panels doubling toward `π/2`.
fn shell_probe<F>(n: usize, k: usize, f: F, opts: &ProbeOptions) -> ProbeResult
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let gl = GaussLegendre::new(opts.nodes);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let angular = |rho: f64| -> f64 {
        let integrand = |th: f64| {
            let (r, s) = (rho * th.cos(), rho * th.sin());
            f(r, s) * r.powi(n as i32 - 2)
        };
        let tc = rho.powi(k as i32 - 1).atan().min(half_pi / 2.0);
        let mut total = gl.integrate(0.0, tc, integrand);
        let mut lo = tc;
        while lo < half_pi {
            let hi = (2.0 * lo).min(half_pi);
            total += gl.integrate(lo, hi, integrand);
            lo = hi;
        }
        total * rho
    };
    let ms: Vec<u32> = (opts.m_min..=opts.m_max).collect();
    let sums = parallel::map_slice(&ms, opts.strategy, |&m| {
        let outer = 2f64.powi(-(m as i32));
        // radial panel in log ρ keeps the power-law profile smooth
        gl.integrate((outer / 2.0).ln(), outer.ln(), |l| {
            let rho = l.exp();
            angular(rho) * rho
        })
    });
    let shell_sums: Vec<ShellSum> = ms
        .iter()
        .zip(&sums)
        .map(|(&m, &sum)| ShellSum {
            m,
            scale: 2f64.powi(-(m as i32)),
            sum,
        })
        .collect();
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = sums.iter().map(|s| s.log2()).collect();
    let (fitted_decay, _) = least_squares(&xs, &ys);
    let verdict = if fitted_decay < -opts.margin {
        Verdict::Convergent
    } else if fitted_decay >= opts.margin {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    ProbeResult {
        verdict,
        shell_sums,
        fitted_decay,
        margin: opts.margin,
    }
}

/// `½ + (n−1)/(2k)`.
pub fn integrability_threshold(n: usize, k: usize) -> f64 {
    0.5 + (n as f64 - 1.0) / (2.0 * k as f64)
}

/// Local integrability of `(|x'|^{2k} + xₙ²)^{−q}` near the origin of `ℝⁿ`.
pub fn integrability_probe(n: usize, k: usize, q: f64) -> Result<ProbeResult> {
    integrability_probe_with(n, k, q, &ProbeOptions::default())
}

pub fn integrability_probe_with(n: usize, k: usize, q: f64, opts: &ProbeOptions) -> Result<ProbeResult> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    if !(q >= 0.0) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent q = {q} must be finite and >= 0")));
    }
    let k2 = 2 * k as i32;
    Ok(shell_probe(n, k, |r, s| (r.powi(k2) + s * s).powf(-q), opts))
}

/// `n − ½ + (n−1)/(2k)`.
pub fn sobolev_threshold(idx: FamilyIndex) -> f64 {
    idx.n as f64 - 0.5 + (idx.n as f64 - 1.0) / (2.0 * idx.k as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub threshold: f64,
    /// `p < threshold`.
    pub closed_form_member: bool,
    pub probe: ProbeResult,
    /// Conclusive probe verdict contradicting the closed form.
    pub disagreement: bool,
}

/// `∫ ‖(I − D²w)⁻¹‖^p det(I − D²w) dx` over dyadic shells, i.e. the
/// `p`-th power of `D²u` for the rotated potential written back in the
/// model's coordinates.
pub fn sobolev_membership(idx: FamilyIndex, p: f64) -> Result<SobolevReport> {
    sobolev_membership_with(idx, p, &ProbeOptions::default())
}

pub fn sobolev_membership_with(idx: FamilyIndex, p: f64, opts: &ProbeOptions) -> Result<SobolevReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("Sobolev exponent p = {p} must be >= 1")));
    }
    let model = model_potential(idx, MAX_RADIUS)?;
    let deficit = model.deficit();
    let n = idx.n;
    let integrand = |r: f64, s: f64| {
        let pt = deficit.axis_point(r, s);
        let mu = pt.vr_over_r.unwrap_or(pt.vrr);
        let (lo, hi) = linalg::eig2_sym(pt.vrr, pt.vrt, pt.vtt);
        let block_det = pt.vrr * pt.vtt - pt.vrt * pt.vrt;
        let small = if hi > 0.0 { block_det / hi } else { lo };
        let min_eig = mu.min(small);
        let det = mu.powi(n as i32 - 2) * block_det;
        (min_eig.abs().powf(-p) * det.abs()).min(f64::MAX)
    };
    let probe = shell_probe(n, idx.k, integrand, opts);
    let threshold = sobolev_threshold(idx);
    let closed_form_member = p < threshold;
    let disagreement = match probe.verdict {
        Verdict::Convergent => !closed_form_member,
        Verdict::Divergent => closed_form_member,
        Verdict::Inconclusive => false,
    };
    Ok(SobolevReport {
        n,
        k: idx.k,
        p,
        threshold,
        closed_form_member,
        probe,
        disagreement,
    })
}
