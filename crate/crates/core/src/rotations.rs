//! Unitary rotations of gradient graphs in `ℂⁿ = ℝⁿ × ℝⁿ`.
//!
//! An upward rotation by `γ` maps `(x, y) ↦ (cos γ x − sin γ y, sin γ x + cos γ y)`;
//! a downward rotation by `φ` is the same map with angle `−φ`. Applied to
//! `L_u = {(x, Du(x))}` the image is again a gradient graph as long as the
//! forward map `x ↦ x̄` stays injective, and its phase shifts by `±n·angle`.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{FieldKind, PotentialField};
use crate::linalg;
use crate::parallel::{self, Strategy};
use crate::sampling;

/// Conditioning limit for the forward Jacobian during inversion.
pub const MAX_CONDITION: f64 = 1e12;
pub const NEWTON_MAX_ITERATIONS: usize = 50;
pub const INVERSION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationParams {
    /// Nonnegative rotation angle in radians.
    pub angle: f64,
    /// Estimated `sup ‖D²u‖` (operator norm) over the sampled domain.
    pub hessian_bound: f64,
    /// Estimated `inf λ_min(D²u)` over the sampled domain.
    pub lambda_min: f64,
    pub direction: Direction,
}

impl RotationParams {
    /// Angle with the sign convention of the rotation matrix.
    pub fn signed_angle(&self) -> f64 {
        match self.direction {
            Direction::Up => self.angle,
            Direction::Down => -self.angle,
        }
    }

    /// Lower bi-Lipschitz constant of `x ↦ x̄`.
    pub fn lipschitz_lower(&self) -> f64 {
        let (s, c) = self.angle.sin_cos();
        match self.direction {
            Direction::Up => c - self.hessian_bound * s,
            Direction::Down => c + self.lambda_min * s,
        }
    }
}

/// How the Hessian bounds of a frame are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationOptions {
    /// Grid points per axis for `n ≤ 3`.
    pub grid_per_axis: usize,
    /// Random sample size for `n > 3`.
    pub random_points: usize,
    pub seed: u64,
    /// Points per axis of the forward-image cloud used to seed Newton.
    pub cloud_per_axis: usize,
    pub strategy: Strategy,
}

impl Default for RotationOptions {
    fn default() -> Self {
        Self {
            grid_per_axis: 64,
            random_points: 100_000,
            seed: 0,
            cloud_per_axis: 9,
            strategy: Strategy::default(),
        }
    }
}

fn domain_sample(n: usize, radius: f64, per_axis: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    if n <= 3 {
        sampling::grid_in_ball(n, radius, per_axis)
    } else {
        sampling::points_in_ball(seed, n, radius, random)
    }
}

/// `(sup ‖D²u‖, inf λ_min)` over the domain sample.
pub fn estimate_hessian_bounds(u: &dyn PotentialField, opts: &RotationOptions) -> (f64, f64) {
    let pts = domain_sample(u.dim(), u.radius(), opts.grid_per_axis, opts.random_points, opts.seed);
    let spectra = parallel::map_slice(&pts, opts.strategy, |x| {
        let e = linalg::sym_eigenvalues(&u.hessian(x));
        (e[e.len() - 1].abs().max(e[0].abs()), e[0])
    });
    spectra
        .iter()
        .fold((0.0f64, f64::INFINITY), |(k, m), &(a, b)| (k.max(a), m.min(b)))
}

/// One point of a (possibly rotated) gradient graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphPoint {
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
    pub theta_bar: f64,
}

/// Samples `(x̄, ȳ, Θ̄)` of a gradient graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSample {
    pub dim: usize,
    pub points: Vec<GraphPoint>,
}

impl GraphSample {
    /// CSV with columns `xbar1..xbarN, ybar1..ybarN, theta_bar`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let names: Vec<String> = (1..=self.dim)
            .map(|i| format!("xbar{i}"))
            .chain((1..=self.dim).map(|i| format!("ybar{i}")))
            .chain(std::iter::once("theta_bar".to_string()))
            .collect();
        s.push_str(&names.join(","));
        s.push('\n');
        for p in &self.points {
            let row: Vec<String> = p
                .x_bar
                .iter()
                .chain(&p.y_bar)
                .chain(std::iter::once(&p.theta_bar))
                .map(|v| format!("{v:e}"))
                .collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// A rotated coordinate frame attached to a potential.
#[derive(Clone)]
pub struct RotatedFrame {
    params: RotationParams,
    source: Arc<dyn PotentialField>,
    /// `(x, x̄(x))` pairs seeding the inversion.
    cloud: Arc<Vec<(Vec<f64>, Vec<f64>)>>,
}

impl std::fmt::Debug for RotatedFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RotatedFrame")
            .field("params", &self.params)
            .field("source", &self.source.kind())
            .field("cloud", &self.cloud.len())
            .finish()
    }
}

/// Rotates `L_u` upward by `γ`.
///
/// Rejects angles with `cos γ − K sin γ ≤ 0`, for `K` the estimated Hessian
/// bound, since the image could fail to be a graph.
pub fn rotate_up(u: Arc<dyn PotentialField>, gamma: f64) -> Result<RotatedFrame> {
    rotate_up_with(u, gamma, &RotationOptions::default())
}

pub fn rotate_up_with(u: Arc<dyn PotentialField>, gamma: f64, opts: &RotationOptions) -> Result<RotatedFrame> {
    check_angle(gamma)?;
    let (k, lmin) = estimate_hessian_bounds(u.as_ref(), opts);
    let params = RotationParams {
        angle: gamma,
        hessian_bound: k,
        lambda_min: lmin,
        direction: Direction::Up,
    };
    if params.lipschitz_lower() <= 0.0 {
        return Err(Error::AngleBound {
            angle: gamma,
            bound: format!(
                "need gamma < pi/2 - arctan K = {:.6} (K = {k:.6})",
                std::f64::consts::FRAC_PI_2 - k.atan()
            ),
        });
    }
    Ok(RotatedFrame::build(u, params, opts))
}

/// Rotates `L_u` downward by `φ`; requires `φ < π/2 + arctan λ_min`.
pub fn rotate_down(u: Arc<dyn PotentialField>, phi: f64) -> Result<RotatedFrame> {
    rotate_down_with(u, phi, &RotationOptions::default())
}

pub fn rotate_down_with(u: Arc<dyn PotentialField>, phi: f64, opts: &RotationOptions) -> Result<RotatedFrame> {
    check_angle(phi)?;
    let (k, lmin) = estimate_hessian_bounds(u.as_ref(), opts);
    let params = RotationParams {
        angle: phi,
        hessian_bound: k,
        lambda_min: lmin,
        direction: Direction::Down,
    };
    if phi > std::f64::consts::PI || params.lipschitz_lower() <= 0.0 {
        return Err(Error::AngleBound {
            angle: phi,
            bound: format!(
                "need phi < pi/2 + arctan lambda_min = {:.6} (lambda_min = {lmin:.6})",
                std::f64::consts::FRAC_PI_2 + lmin.atan()
            ),
        });
    }
    Ok(RotatedFrame::build(u, params, opts))
}

fn check_angle(a: f64) -> Result<()> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("rotation angle {a} must be finite and >= 0")));
    }
    Ok(())
}

impl RotatedFrame {
    fn build(source: Arc<dyn PotentialField>, params: RotationParams, opts: &RotationOptions) -> Self {
        let n = source.dim();
        let cloud_pts = domain_sample(
            n,
            source.radius(),
            opts.cloud_per_axis,
            opts.cloud_per_axis.pow(3),
            opts.seed ^ 0x9e37_79b9,
        );
        let mut frame = Self {
            params,
            source,
            cloud: Arc::new(Vec::new()),
        };
        let images = parallel::map_slice(&cloud_pts, opts.strategy, |x| frame.forward(x));
        frame.cloud = Arc::new(cloud_pts.into_iter().zip(images).collect());
        frame
    }

    /// Frame with caller-supplied parameters and no angle check. Used when
    /// injectivity is certified by other means (e.g. the `π/4` rotation of
    /// a potential whose largest eigenvalue stays below one).
    pub fn certified(source: Arc<dyn PotentialField>, params: RotationParams, opts: &RotationOptions) -> Self {
        Self::build(source, params, opts)
    }

    pub fn params(&self) -> &RotationParams {
        &self.params
    }

    pub fn source(&self) -> &Arc<dyn PotentialField> {
        &self.source
    }

    pub fn lipschitz_lower(&self) -> f64 {
        self.params.lipschitz_lower()
    }

    fn sc(&self) -> (f64, f64) {
        self.params.signed_angle().sin_cos()
    }

    /// `x̄ = cos θ·x − sin θ·Du(x)` with the signed angle `θ`.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let (s, c) = self.sc();
        let du = self.source.gradient(x);
        x.iter().zip(du.iter()).map(|(xi, di)| c * xi - s * di).collect()
    }

    /// `(x̄, ȳ)` for the graph point over `x`.
    pub fn graph_point(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (s, c) = self.sc();
        let du = self.source.gradient(x);
        let xb = x.iter().zip(du.iter()).map(|(xi, di)| c * xi - s * di).collect();
        let yb = x.iter().zip(du.iter()).map(|(xi, di)| s * xi + c * di).collect();
        (xb, yb)
    }

    /// Rotated potential `ū` at the image of `x`:
    /// `u − sin θ cos θ (|Du|² − |x|²)/2 − sin²θ (x·Du)`.
    pub fn potential_bar(&self, x: &[f64]) -> f64 {
        let (s, c) = self.sc();
        let du = self.source.gradient(x);
        let du2 = du.norm_squared();
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let xdu: f64 = x.iter().zip(du.iter()).map(|(a, b)| a * b).sum();
        self.source.value(x) - s * c * (du2 - x2) / 2.0 - s * s * xdu
    }

    /// `dx̄/dx = cos θ I − sin θ D²u`.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let (s, c) = self.sc();
        let n = x.len();
        DMatrix::identity(n, n) * c - self.source.hessian(x) * s
    }

    /// Condition number of the forward Jacobian relative to the scale of the
    /// map, `(|cos θ| + |sin θ|‖D²u‖) / σ_min`. Unlike the plain ratio of
    /// singular values it also flags `cos θ I − sin θ D²u ≈ 0`.
    pub fn jacobian_condition(&self, x: &[f64]) -> f64 {
        let (s, c) = self.sc();
        let h = self.source.hessian(x);
        let scale = c.abs() + s.abs() * linalg::sym_operator_norm(&h);
        let n = x.len();
        let j = DMatrix::identity(n, n) * c - h * s;
        let lo = linalg::sym_eigenvalues(&j).iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if lo == 0.0 {
            f64::INFINITY
        } else {
            scale / lo
        }
    }

    /// Hessian of `ū` in `x̄` coordinates at the image of `x`:
    /// `(sin θ I + cos θ H)(cos θ I − sin θ H)⁻¹`.
    pub fn hessian_bar(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (s, c) = self.sc();
        let n = x.len();
        let h = self.source.hessian(x);
        let num = DMatrix::identity(n, n) * s + &h * c;
        let den = DMatrix::identity(n, n) * c - &h * s;
        let cond = self.jacobian_condition(x);
        if cond > MAX_CONDITION {
            return Err(Error::SingularMap {
                point: x.to_vec(),
                condition: cond,
            });
        }
        let inv = den.lu().try_inverse().ok_or(Error::SingularMap {
            point: x.to_vec(),
            condition: f64::INFINITY,
        })?;
        Ok(linalg::symmetrize(&(num * inv)))
    }

    /// Phase of the rotated graph computed from `D²ū`.
    pub fn theta_bar(&self, x: &[f64]) -> Result<f64> {
        Ok(linalg::sym_eigenvalues(&self.hessian_bar(x)?)
            .iter()
            .map(|l| l.atan())
            .sum())
    }

    /// `Θ(x) ± n·angle`, valid wherever the image remains a graph; finite
    /// even where `D²ū` blows up.
    pub fn theta_shifted(&self, x: &[f64]) -> f64 {
        crate::geometry::theta_at(self.source.as_ref(), x) + x.len() as f64 * self.params.signed_angle()
    }

    fn nearest_seed(&self, xb: &[f64]) -> Vec<f64> {
        self.cloud
            .iter()
            .min_by(|a, b| linalg::dist(&a.1, xb).total_cmp(&linalg::dist(&b.1, xb)))
            .map(|p| p.0.clone())
            .unwrap_or_else(|| xb.to_vec())
    }

    /// Samples the rotated graph over the given preimage points.
    pub fn sample(&self, points: &[Vec<f64>], strategy: Strategy) -> GraphSample {
        let pts = parallel::map_slice(points, strategy, |x| {
            let (x_bar, y_bar) = self.graph_point(x);
            GraphPoint {
                x_bar,
                y_bar,
                theta_bar: self.theta_shifted(x),
            }
        });
        GraphSample {
            dim: self.source.dim(),
            points: pts,
        }
    }

    /// The rotated potential as a field in `x̄` coordinates.
    pub fn as_potential(&self) -> RotatedPotential {
        RotatedPotential { frame: self.clone() }
    }
}

/// Newton inversion of the forward map: finds `x` with `x̄(x) = target`.
///
/// Seeds from `guess` or, when absent, from the nearest forward image in the
/// frame's cloud. Fails when the Jacobian condition number exceeds
/// [`MAX_CONDITION`] or after [`NEWTON_MAX_ITERATIONS`] steps.
pub fn invert_map(frame: &RotatedFrame, target: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
    if frame.params.angle == 0.0 {
        return Ok(target.to_vec());
    }
    let n = target.len();
    let mut x = match guess {
        Some(g) => g.to_vec(),
        None => frame.nearest_seed(target),
    };
    let residual = |x: &[f64]| -> (DVector<f64>, f64) {
        let f = DVector::from_iterator(n, frame.forward(x).iter().zip(target).map(|(a, b)| a - b));
        let norm = f.norm();
        (f, norm)
    };
    let (mut f, mut fnorm) = residual(&x);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        if fnorm < 1e-14 * (1.0 + linalg::norm(target)) {
            return Ok(x);
        }
        let cond = frame.jacobian_condition(&x);
        if cond > MAX_CONDITION {
            return Err(Error::SingularMap {
                point: x,
                condition: cond,
            });
        }
        let j = frame.jacobian(&x);
        let step = j.lu().solve(&f).ok_or(Error::SingularMap {
            point: x.clone(),
            condition: f64::INFINITY,
        })?;
        // backtracking on |F|
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - lambda * d).collect();
            let (ft, nt) = residual(&trial);
            if nt < fnorm || nt == 0.0 {
                x = trial;
                f = ft;
                fnorm = nt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fnorm < INVERSION_TOLERANCE {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            iterations: NEWTON_MAX_ITERATIONS,
            residual: fnorm,
        })
    }
}

/// `ū` as a [`PotentialField`] on the rotated base plane.
///
/// Evaluation inverts the forward map per query; queries that fail to
/// invert return NaN entries.
#[derive(Debug, Clone)]
pub struct RotatedPotential {
    frame: RotatedFrame,
}

impl RotatedPotential {
    pub fn frame(&self) -> &RotatedFrame {
        &self.frame
    }

    pub fn preimage(&self, xb: &[f64]) -> Result<Vec<f64>> {
        invert_map(&self.frame, xb, None)
    }
}

impl PotentialField for RotatedPotential {
    fn dim(&self) -> usize {
        self.frame.source.dim()
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rotated {
            angle: self.frame.params.signed_angle(),
        }
    }
    fn radius(&self) -> f64 {
        let n = self.dim();
        let center = linalg::norm(&self.frame.forward(&vec![0.0; n]));
        (self.frame.lipschitz_lower() * self.frame.source.radius() - center).max(0.0)
    }
    fn value(&self, xb: &[f64]) -> f64 {
        self.preimage(xb)
            .map(|x| self.frame.potential_bar(&x))
            .unwrap_or(f64::NAN)
    }
    fn gradient(&self, xb: &[f64]) -> DVector<f64> {
        match self.preimage(xb) {
            Ok(x) => DVector::from_vec(self.frame.graph_point(&x).1),
            Err(_) => DVector::from_element(xb.len(), f64::NAN),
        }
    }
    fn hessian(&self, xb: &[f64]) -> DMatrix<f64> {
        let n = xb.len();
        self.preimage(xb)
            .and_then(|x| self.frame.hessian_bar(&x))
            .unwrap_or_else(|_| DMatrix::from_element(n, n, f64::NAN))
    }
}

/// Outcome of [`injectivity_check`]; failure is a result, not an error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityCertificate {
    pub passed: bool,
    pub points_checked: usize,
    pub points_excepted: usize,
    pub pairs_checked: usize,
    /// Largest `λ_max(D²w)` seen off the exception set.
    pub max_lambda: f64,
    /// First point with `λ_max ≥ 1`, if any.
    pub eigen_witness: Option<Vec<f64>>,
    /// First pair violating `(x₁ − x₂)·(F(x₁) − F(x₂)) > 0`, `F = id − Dw`.
    pub monotonicity_witness: Option<(Vec<f64>, Vec<f64>)>,
}

pub const EXCEPTION_RADIUS: f64 = 1e-12;

/// Certifies that rotating `L_w` upward by `π/4` yields a graph: checks
/// `λ_max(D²w) < 1` on the sample outside the declared exception set and
/// spot-checks strict monotonicity of `id − Dw` on random sample pairs.
pub fn injectivity_check(
    w: &dyn PotentialField,
    sample: &[Vec<f64>],
    exceptions: &[Vec<f64>],
    pairs: usize,
    seed: u64,
    strategy: Strategy,
) -> InjectivityCertificate {
    let excepted = |x: &[f64]| exceptions.iter().any(|e| linalg::dist(e, x) <= EXCEPTION_RADIUS);
    let lambdas = parallel::map_slice(sample, strategy, |x| {
        if excepted(x) {
            None
        } else {
            Some(*linalg::sym_eigenvalues(&w.hessian(x)).last().unwrap_or(&f64::NEG_INFINITY))
        }
    });
    let mut max_lambda = f64::NEG_INFINITY;
    let mut eigen_witness = None;
    let mut checked = 0;
    for (x, l) in sample.iter().zip(&lambdas) {
        if let Some(l) = l {
            checked += 1;
            max_lambda = max_lambda.max(*l);
            if *l >= 1.0 && eigen_witness.is_none() {
                eigen_witness = Some(x.clone());
            }
        }
    }
    let mut monotonicity_witness = None;
    let mut pairs_checked = 0;
    if sample.len() >= 2 {
        let mut rng = sampling::rng(seed);
        let idx: Vec<(usize, usize)> = (0..pairs)
            .map(|_| {
                let a = rng.random_range(0..sample.len());
                let mut b = rng.random_range(0..sample.len() - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect();
        let f = |x: &[f64]| -> Vec<f64> {
            let dw = w.gradient(x);
            x.iter().zip(dw.iter()).map(|(a, b)| a - b).collect()
        };
        let ok = parallel::map_slice(&idx, strategy, |&(a, b)| {
            let (xa, xb) = (&sample[a], &sample[b]);
            if linalg::dist(xa, xb) == 0.0 {
                return true;
            }
            let (fa, fb) = (f(xa), f(xb));
            let dot: f64 = (0..xa.len()).map(|i| (xa[i] - xb[i]) * (fa[i] - fb[i])).sum();
            dot > 0.0
        });
        pairs_checked = idx.len();
        if let Some(k) = ok.iter().position(|v| !v) {
            let (a, b) = idx[k];
            monotonicity_witness = Some((sample[a].clone(), sample[b].clone()));
        }
    }
    InjectivityCertificate {
        passed: eigen_witness.is_none() && monotonicity_witness.is_none(),
        points_checked: checked,
        points_excepted: sample.len() - checked,
        pairs_checked,
        max_lambda,
        eigen_witness,
        monotonicity_witness,
    }
}
