use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{phase_gradient, PotentialField};
use crate::linalg;
use crate::parallel::{self, Strategy};

/// Polynomial bump `η(z) = (1 − |z − c|²/R²)₊^p` on `ℝ²ⁿ`.
///
/// The default power `p = 3` has two continuous derivatives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    pub center: Vec<f64>,
    pub radius: f64,
    pub power: u32,
}

impl TestFunction {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || center.len() % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "test function center must lie in R^(2n), got length {}",
                center.len()
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("support radius {radius} must be positive")));
        }
        Ok(Self {
            center,
            radius,
            power: 3,
        })
    }

    /// Raises the profile power; anything below 3 loses the second derivative.
    pub fn with_power(mut self, power: u32) -> Result<Self> {
        if power < 3 {
            return Err(Error::InvalidParameter(format!("bump power {power} < 3")));
        }
        self.power = power;
        Ok(self)
    }

    /// Bump centered at `(x₀, Du(x₀))`.
    pub fn on_graph(u: &dyn PotentialField, x0: &[f64], radius: f64) -> Result<Self> {
        let mut c = x0.to_vec();
        c.extend(u.gradient(x0).iter());
        Self::new(c, radius)
    }

    fn base_dim(&self) -> usize {
        self.center.len() / 2
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        let q = self.q(z);
        if q >= 1.0 {
            0.0
        } else {
            (1.0 - q).powi(self.power as i32)
        }
    }

    /// `∇η(z)`; zero outside the support.
    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let q = self.q(z);
        if q >= 1.0 {
            return vec![0.0; z.len()];
        }
        let p = self.power as f64;
        let f = -2.0 * p * (1.0 - q).powi(self.power as i32 - 1) / (self.radius * self.radius);
        z.iter().zip(&self.center).map(|(a, c)| f * (a - c)).collect()
    }

    fn q(&self, z: &[f64]) -> f64 {
        linalg::dist(z, &self.center).powi(2) / (self.radius * self.radius)
    }
}

/// Tensor-product midpoint rule on the bounding box of the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub per_axis: usize,
    pub strategy: Strategy,
}

impl QuadratureGrid {
    pub fn new(per_axis: usize) -> Self {
        Self {
            per_axis,
            strategy: Strategy::default(),
        }
    }
}

/// Signed pairing `∫ ⟨∇_g Θ, ∇_g η⟩ dvol_g` over the graph of `u`, as the
/// `x`-integral of `DΘᵀ g⁻¹ D(η∘graph) √det g`.
pub fn weak_residual(u: &dyn PotentialField, eta: &TestFunction, grid: &QuadratureGrid) -> Result<f64> {
    let n = u.dim();
    if eta.base_dim() != n {
        return Err(Error::Dimension {
            expected: 2 * n,
            got: eta.center.len(),
        });
    }
    if grid.per_axis == 0 {
        return Err(Error::InvalidParameter("quadrature grid needs at least one cell".into()));
    }
    let cx = &eta.center[..n];
    if linalg::norm(cx) + eta.radius > u.radius() * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "test function support (center {cx:?}, radius {}) leaves the domain of radius {}",
            eta.radius,
            u.radius()
        )));
    }
    if u.third(cx).is_none() {
        return Err(Error::NoThirdDerivatives(u.kind().label()));
    }
    let m = grid.per_axis;
    let h = 2.0 * eta.radius / m as f64;
    let node = |axis: usize, i: usize| cx[axis] - eta.radius + h * (i as f64 + 0.5);
    let cells_per_slab = m.pow(n as u32 - 1);

    let integrand = |x: &[f64]| -> f64 {
        let du = u.gradient(x);
        let z: Vec<f64> = x.iter().copied().chain(du.iter().copied()).collect();
        let deta = eta.gradient(&z);
        if deta.iter().all(|v| *v == 0.0) {
            return 0.0;
        }
        let hess = u.hessian(x);
        let third = u.third(x).expect("checked at the center");
        let dtheta = phase_gradient(&hess, &third);
        let g = DMatrix::identity(n, n) + &hess * &hess;
        let chol = g.cholesky().expect("I + H² is positive definite");
        let sqrt_det: f64 = chol.l().diagonal().iter().product();
        let deta_x = DVector::from_column_slice(&deta[..n]) + &hess * DVector::from_column_slice(&deta[n..]);
        let grad_g = chol.solve(&dtheta);
        grad_g.dot(&deta_x) * sqrt_det
    };

    let slabs = parallel::map_indexed(m, grid.strategy, |i0| {
        let mut x = vec![0.0; n];
        x[0] = node(0, i0);
        let vals: Vec<f64> = (0..cells_per_slab)
            .map(|flat| {
                let mut rem = flat;
                for (axis, xa) in x.iter_mut().enumerate().skip(1) {
                    *xa = node(axis, rem % m);
                    rem /= m;
                }
                integrand(&x)
            })
            .collect();
        parallel::pairwise_sum(&vals)
    });
    Ok(parallel::pairwise_sum(&slabs) * h.powi(n as i32))
}
