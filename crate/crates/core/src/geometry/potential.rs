use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::axisym::AxisymPoint;
use crate::error::{Error, Result};
use crate::jets::{Scalar, TruncatedSeries};

/// Fully symmetric third-derivative tensor `D³u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    /// Writes `v` into all six index permutations.
    pub fn set_sym(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self.data[(a * n + b) * n + c] = v;
        }
    }

    /// Contraction `Σ_ab M_ab T_abj`.
    pub fn contract_pair(&self, m: &DMatrix<f64>) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |j, _| {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += m[(a, b)] * self.get(a, b, j);
                }
            }
            acc
        })
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    worst = worst
                        .max((v - self.get(j, i, k)).abs())
                        .max((v - self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }
}

/// Tag describing where a potential comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldKind {
    Quadratic,
    HarmonicCubic,
    Model { n: usize, k: usize },
    JetBacked { n: usize, k: usize, order: usize },
    GridSampled { points_per_axis: usize },
    Rotated { angle: f64 },
    Custom,
}

impl FieldKind {
    pub fn label(&self) -> String {
        match self {
            FieldKind::Quadratic => "quadratic".into(),
            FieldKind::HarmonicCubic => "harmonic-cubic".into(),
            FieldKind::Model { n, k } => format!("model(n={n},k={k})"),
            FieldKind::JetBacked { n, k, order } => format!("jet(n={n},k={k},order={order})"),
            FieldKind::GridSampled { .. } => "grid-sampled".into(),
            FieldKind::Rotated { angle } => format!("rotated({angle})"),
            FieldKind::Custom => "custom".into(),
        }
    }
}

/// A potential `u` on the ball `B_R ⊂ ℝⁿ` with its first derivatives.
pub trait PotentialField: Send + Sync {
    fn dim(&self) -> usize;
    fn kind(&self) -> FieldKind;
    /// Radius of the ball on which the field is defined.
    fn radius(&self) -> f64;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> DVector<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;
    /// `D³u`, when the kind supplies it.
    fn third(&self, _x: &[f64]) -> Option<Tensor3> {
        None
    }
}

/// `u(x) = ½ xᵀ A x` for a symmetric `A`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    a: DMatrix<f64>,
    radius: f64,
}

impl Quadratic {
    pub fn new(a: DMatrix<f64>, radius: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidParameter("quadratic form must be square".into()));
        }
        let asym = crate::linalg::asymmetry(&a);
        if asym > 1e-12 {
            return Err(Error::Asymmetric {
                asymmetry: asym,
                tolerance: 1e-12,
            });
        }
        Ok(Self { a, radius })
    }

    /// `c |x|² / 2` in dimension `n`.
    pub fn isotropic(n: usize, c: f64, radius: f64) -> Self {
        Self {
            a: DMatrix::identity(n, n) * c,
            radius,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

impl PotentialField for Quadratic {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Quadratic
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        0.5 * v.dot(&(&self.a * &v))
    }
    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        &self.a * DVector::from_column_slice(x)
    }
    fn hessian(&self, _x: &[f64]) -> DMatrix<f64> {
        self.a.clone()
    }
    fn third(&self, _x: &[f64]) -> Option<Tensor3> {
        Some(Tensor3::zeros(self.dim()))
    }
}

/// `u = x₁³ − 3x₁x₂²` on ℝ², whose Hessian is trace-free.
#[derive(Debug, Clone)]
pub struct HarmonicCubic {
    radius: f64,
}

impl HarmonicCubic {
    pub fn new(radius: f64) -> Self {
        Self { radius }
    }
}

impl PotentialField for HarmonicCubic {
    fn dim(&self) -> usize {
        2
    }
    fn kind(&self) -> FieldKind {
        FieldKind::HarmonicCubic
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, x: &[f64]) -> f64 {
        x[0].powi(3) - 3.0 * x[0] * x[1] * x[1]
    }
    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_vec(vec![3.0 * (x[0] * x[0] - x[1] * x[1]), -6.0 * x[0] * x[1]])
    }
    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[6.0 * x[0], -6.0 * x[1], -6.0 * x[1], -6.0 * x[0]])
    }
    fn third(&self, _x: &[f64]) -> Option<Tensor3> {
        let mut t = Tensor3::zeros(2);
        t.set_sym(0, 0, 0, 6.0);
        t.set_sym(0, 1, 1, -6.0);
        Some(t)
    }
}

/// Axisymmetric polynomial potential `u(x', xₙ) = f(|x'|², xₙ)`.
///
/// Writing the potential through `s = |x'|²` keeps every Cartesian
/// derivative polynomial, so the axis `x' = 0` needs no special casing.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymPolynomial {
    n: usize,
    radius: f64,
    kind: FieldKind,
    /// `(m, j, c)` for the monomial `c · s^m t^j`.
    terms: Vec<(usize, usize, f64)>,
}

fn falling(p: usize, a: usize) -> f64 {
    if a > p {
        return 0.0;
    }
    ((p - a + 1)..=p).fold(1.0, |acc, v| acc * v as f64)
}

impl AxisymPolynomial {
    pub fn new(n: usize, radius: f64, kind: FieldKind, terms: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "axisymmetric potentials need n >= 2, got {n}"
            )));
        }
        let mut terms: Vec<_> = terms.into_iter().filter(|t| t.2 != 0.0).collect();
        terms.sort_by_key(|t| (t.0, t.1));
        Ok(Self {
            n,
            radius,
            kind,
            terms,
        })
    }

    /// From a series `v(r, t)` that is even in `r`: `r^{2m} t^j ↦ s^m t^j`.
    pub fn from_even_series<T: Scalar>(
        n: usize,
        radius: f64,
        kind: FieldKind,
        v: &TruncatedSeries<T>,
    ) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, j, c) in v.terms() {
            if c.is_zero() {
                continue;
            }
            if i % 2 == 1 {
                return Err(Error::InvalidParameter(format!(
                    "series has odd radial term r^{i} t^{j}"
                )));
            }
            terms.push((i / 2, j, c.to_f64()));
        }
        Self::new(n, radius, kind, terms)
    }

    pub fn terms(&self) -> &[(usize, usize, f64)] {
        &self.terms
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    /// The potential `|x|²/2 − u`, built term-wise so `I − D²u` is free of
    /// cancellation near points where `D²u` approaches the identity.
    pub fn identity_deficit(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|&(m, j, c)| (m, j, -c)).collect();
        for (m, j) in [(1usize, 0usize), (0, 2)] {
            match terms.iter_mut().find(|t| t.0 == m && t.1 == j) {
                Some(t) => t.2 += 0.5,
                None => terms.push((m, j, 0.5)),
            }
        }
        Self::new(self.n, self.radius, FieldKind::Custom, terms).expect("same dimension")
    }

    /// `∂_s^a ∂_t^b f` at `(s, t)`.
    pub fn partial(&self, a: usize, b: usize, s: f64, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(m, j, c) in &self.terms {
            if m < a || j < b {
                continue;
            }
            acc += c * falling(m, a) * falling(j, b) * s.powi((m - a) as i32) * t.powi((j - b) as i32);
        }
        acc
    }

    /// Profile derivatives at radius `r ≥ 0` and height `t`.
    pub fn axis_point(&self, r: f64, t: f64) -> AxisymPoint {
        let s = r * r;
        let fs = self.partial(1, 0, s, t);
        let fss = self.partial(2, 0, s, t);
        AxisymPoint {
            n: self.n,
            r,
            t,
            vr_over_r: Some(2.0 * fs),
            vrr: 2.0 * fs + 4.0 * s * fss,
            vrt: 2.0 * r * self.partial(1, 1, s, t),
            vtt: self.partial(0, 2, s, t),
        }
    }

    /// `v(r, t)` itself.
    pub fn profile(&self, r: f64, t: f64) -> f64 {
        self.partial(0, 0, r * r, t)
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], f64, f64) {
        let (xp, xn) = x.split_at(self.n - 1);
        let s = xp.iter().map(|v| v * v).sum();
        (xp, s, xn[0])
    }
}

impl PotentialField for AxisymPolynomial {
    fn dim(&self) -> usize {
        self.n
    }
    fn kind(&self) -> FieldKind {
        self.kind.clone()
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, x: &[f64]) -> f64 {
        let (_, s, t) = self.split(x);
        self.partial(0, 0, s, t)
    }
    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let (xp, s, t) = self.split(x);
        let fs = self.partial(1, 0, s, t);
        let m = self.n - 1;
        DVector::from_fn(self.n, |i, _| {
            if i < m {
                2.0 * xp[i] * fs
            } else {
                self.partial(0, 1, s, t)
            }
        })
    }
    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let (xp, s, t) = self.split(x);
        let m = self.n - 1;
        let fs = self.partial(1, 0, s, t);
        let fss = self.partial(2, 0, s, t);
        let fst = self.partial(1, 1, s, t);
        let ftt = self.partial(0, 2, s, t);
        DMatrix::from_fn(self.n, self.n, |i, j| match (i < m, j < m) {
            (true, true) => {
                let d = if i == j { 2.0 * fs } else { 0.0 };
                d + 4.0 * xp[i] * xp[j] * fss
            }
            (true, false) => 2.0 * xp[i] * fst,
            (false, true) => 2.0 * xp[j] * fst,
            (false, false) => ftt,
        })
    }
    fn third(&self, x: &[f64]) -> Option<Tensor3> {
        let (xp, s, t) = self.split(x);
        let m = self.n - 1;
        let fss = self.partial(2, 0, s, t);
        let fsss = self.partial(3, 0, s, t);
        let fst = self.partial(1, 1, s, t);
        let fsst = self.partial(2, 1, s, t);
        let fstt = self.partial(1, 2, s, t);
        let fttt = self.partial(0, 3, s, t);
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut out = Tensor3::zeros(self.n);
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    let v = 4.0 * (delta(a, b) * xp[c] + delta(a, c) * xp[b] + delta(b, c) * xp[a]) * fss
                        + 8.0 * xp[a] * xp[b] * xp[c] * fsss;
                    out.set_sym(a, b, c, v);
                }
                out.set_sym(a, b, m, 2.0 * delta(a, b) * fst + 4.0 * xp[a] * xp[b] * fsst);
            }
            out.set_sym(a, m, m, 2.0 * xp[a] * fstt);
        }
        out.set_sym(m, m, m, fttt);
        Some(out)
    }
}

/// Potential known only through samples on a uniform grid over `[−R, R]ⁿ`.
///
/// Derivatives come from the second-order centered stencil at the nearest
/// interior node; third derivatives are not provided.
#[derive(Debug, Clone)]
pub struct GridSampled {
    n: usize,
    radius: f64,
    points: usize,
    h: f64,
    values: Vec<f64>,
}

impl GridSampled {
    pub fn sample<F: Fn(&[f64]) -> f64>(n: usize, radius: f64, points: usize, f: F) -> Result<Self> {
        if points < 5 {
            return Err(Error::InvalidParameter("grid needs at least 5 points per axis".into()));
        }
        let h = 2.0 * radius / (points - 1) as f64;
        let total = points.pow(n as u32);
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; n];
        for flat in 0..total {
            let mut rem = flat;
            for xi in x.iter_mut() {
                *xi = -radius + h * (rem % points) as f64;
                rem /= points;
            }
            values.push(f(&x));
        }
        Ok(Self {
            n,
            radius,
            points,
            h,
            values,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    fn node(&self, x: &[f64]) -> Vec<usize> {
        x.iter()
            .map(|&xi| {
                let k = ((xi + self.radius) / self.h).round() as isize;
                k.clamp(1, self.points as isize - 2) as usize
            })
            .collect()
    }

    fn at(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for &k in idx.iter().rev() {
            flat = flat * self.points + k;
        }
        self.values[flat]
    }

    fn shifted(&self, base: &[usize], moves: &[(usize, isize)]) -> f64 {
        let mut idx = base.to_vec();
        for &(axis, d) in moves {
            idx[axis] = (idx[axis] as isize + d) as usize;
        }
        self.at(&idx)
    }
}

impl PotentialField for GridSampled {
    fn dim(&self) -> usize {
        self.n
    }
    fn kind(&self) -> FieldKind {
        FieldKind::GridSampled {
            points_per_axis: self.points,
        }
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.at(&self.node(x))
    }
    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let base = self.node(x);
        DVector::from_fn(self.n, |i, _| {
            (self.shifted(&base, &[(i, 1)]) - self.shifted(&base, &[(i, -1)])) / (2.0 * self.h)
        })
    }
    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let base = self.node(x);
        let h2 = self.h * self.h;
        let mut m = DMatrix::zeros(self.n, self.n);
        let c = self.at(&base);
        for i in 0..self.n {
            m[(i, i)] = (self.shifted(&base, &[(i, 1)]) - 2.0 * c + self.shifted(&base, &[(i, -1)])) / h2;
            for j in (i + 1)..self.n {
                let v = (self.shifted(&base, &[(i, 1), (j, 1)])
                    - self.shifted(&base, &[(i, 1), (j, -1)])
                    - self.shifted(&base, &[(i, -1), (j, 1)])
                    + self.shifted(&base, &[(i, -1), (j, -1)]))
                    / (4.0 * h2);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_hessian(u: &dyn PotentialField, x: &[f64], h: f64) -> DMatrix<f64> {
        let n = x.len();
        DMatrix::from_fn(n, n, |i, j| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            (u.gradient(&xp)[i] - u.gradient(&xm)[i]) / (2.0 * h)
        })
    }

    fn model31() -> AxisymPolynomial {
        AxisymPolynomial::new(
            3,
            0.2,
            FieldKind::Model { n: 3, k: 1 },
            vec![(1, 0, 0.5), (2, 0, -1.0), (1, 2, -1.0)],
        )
        .unwrap()
    }

    #[test]
    fn axisym_derivatives_match_finite_differences() {
        let u = model31();
        let x = [0.07, -0.05, 0.11];
        let h = 1e-5;
        for i in 0..3 {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (u.value(&xp) - u.value(&xm)) / (2.0 * h);
            assert!((fd - u.gradient(&x)[i]).abs() < 1e-9);
        }
        let fd = fd_hessian(&u, &x, h);
        assert!((fd - u.hessian(&x)).abs().max() < 1e-8);
        let t = u.third(&x).unwrap();
        assert!(t.max_asymmetry() < 1e-15);
        for k in 0..3 {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let dh = (u.hessian(&xp) - u.hessian(&xm)) / (2.0 * h);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((dh[(i, j)] - t.get(i, j, k)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn deficit_is_identity_minus_hessian() {
        let u = model31();
        let d = u.identity_deficit();
        let x = [0.03, 0.02, -0.04];
        let lhs = d.hessian(&x);
        let rhs = DMatrix::identity(3, 3) - u.hessian(&x);
        assert!((lhs - rhs).abs().max() < 1e-14);
    }

    #[test]
    fn quadratic_has_zero_third() {
        let q = Quadratic::isotropic(3, 2.0, 1.0);
        assert_eq!(q.third(&[0.1, 0.2, 0.3]).unwrap(), Tensor3::zeros(3));
        assert!((q.value(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_cubic_trace_free() {
        let u = HarmonicCubic::new(1.0);
        let h = u.hessian(&[0.3, -0.7]);
        assert!(h.trace().abs() < 1e-15);
    }

    #[test]
    fn grid_sampled_second_order_stencil() {
        let g = GridSampled::sample(2, 1.0, 41, |x| x[0].powi(3) + x[0] * x[1] * x[1]).unwrap();
        assert!(g.third(&[0.0, 0.0]).is_none());
        let h = g.hessian(&[0.5, 0.25]);
        assert!((h[(0, 0)] - 3.0).abs() < 1e-10);
        assert!((h[(0, 1)] - 0.5).abs() < 1e-10);
        assert!(crate::linalg::asymmetry(&h) < 1e-12);
    }

    #[test]
    fn odd_series_rejected() {
        let v = TruncatedSeries::<f64>::var_r(3);
        assert!(AxisymPolynomial::from_even_series(3, 0.1, FieldKind::Custom, &v).is_err());
    }
}
