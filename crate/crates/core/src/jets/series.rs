use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use super::Scalar;
use crate::error::{Error, Result};

/// Parity of a series in the radial variable `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Parity::Even,
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    fn sum(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::Mixed
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Mixed => Parity::Mixed,
        }
    }

    fn admits(self, i: usize) -> bool {
        match self {
            Parity::Even => i.is_multiple_of(2),
            Parity::Odd => i % 2 == 1,
            Parity::Mixed => true,
        }
    }
}

#[inline]
fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Bivariate Taylor polynomial in the radial variable `r` and the normal
/// variable `t`, truncated at total degree `order`.
///
/// Coefficients live in a dense triangular array; monomials `r^i t^j` with
/// `i + j > order` are never stored. The r-parity is tracked through every
/// operation and checked against the coefficients in debug builds.
#[derive(Debug, Clone)]
pub struct TruncatedSeries<T: Scalar> {
    order: usize,
    coeffs: Vec<T>,
    parity: Parity,
}

impl<T: Scalar> TruncatedSeries<T> {
    pub fn zero(order: usize) -> Self {
        let len = slot(0, order) + 1;
        Self {
            order,
            coeffs: vec![T::zero(); len],
            parity: Parity::Even,
        }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    /// The series `r`.
    pub fn var_r(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[slot(1, 0)] = T::one();
        }
        s.parity = Parity::Odd;
        s
    }

    /// The series `t`.
    pub fn var_t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[slot(0, 1)] = T::one();
        }
        s
    }

    /// Builds a series from `(i, j, c)` terms; terms beyond `order` are dropped.
    /// Parity is inferred from the nonzero terms.
    pub fn from_terms(order: usize, terms: &[(usize, usize, T)]) -> Self {
        let mut s = Self::zero(order);
        s.parity = Parity::Mixed;
        for (i, j, c) in terms {
            if i + j <= order {
                let k = slot(*i, *j);
                s.coeffs[k] = s.coeffs[k].clone() + c.clone();
            }
        }
        s.parity = s.detect_parity();
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_even_in_r(&self) -> bool {
        self.parity == Parity::Even
    }

    /// Coefficient of `r^i t^j` (zero beyond the truncation order).
    pub fn coeff(&self, i: usize, j: usize) -> T {
        if i + j > self.order {
            T::zero()
        } else {
            self.coeffs[slot(i, j)].clone()
        }
    }

    /// Sets a coefficient. Parity is re-derived so a term of the opposite
    /// parity demotes the series to [`Parity::Mixed`].
    pub fn set(&mut self, i: usize, j: usize, c: T) {
        assert!(i + j <= self.order, "r^{i} t^{j} beyond order {}", self.order);
        if !c.is_zero() && !self.parity.admits(i) {
            self.parity = Parity::Mixed;
        }
        self.coeffs[slot(i, j)] = c;
    }

    /// Iterates `(i, j, coeff)` in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let n = self.order;
        (0..=n).flat_map(move |i| (0..=n - i).map(move |j| (i, j, &self.coeffs[slot(i, j)])))
    }

    fn detect_parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (i, _, c) in self.terms() {
            if !c.is_zero() {
                if i % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    #[inline]
    fn debug_check(&self) {
        debug_assert!(
            self.terms()
                .all(|(i, _, c)| c.is_zero() || self.parity.admits(i)),
            "parity flag {:?} contradicts coefficients",
            self.parity
        );
    }

    /// Drops every term of total degree above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = Self::zero(order);
        let len = out.coeffs.len();
        out.coeffs.clone_from_slice(&self.coeffs[..len]);
        out.parity = self.parity;
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            parity: self.parity,
        }
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn mul_series(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for da in 0..=order {
            for ja in 0..=da {
                let a = &self.coeffs[slot(da - ja, ja)];
                if a.is_zero() {
                    continue;
                }
                let ia = da - ja;
                for db in 0..=order - da {
                    for jb in 0..=db {
                        let b = &other.coeffs[slot(db - jb, jb)];
                        if b.is_zero() {
                            continue;
                        }
                        let k = slot(ia + db - jb, ja + jb);
                        out.coeffs[k] = out.coeffs[k].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out.parity = self.parity.product(other.parity);
        out.debug_check();
        out
    }

    /// Product of two series of identical order; mismatched orders are rejected.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(self.mul_series(other))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a00 = &self.coeffs[0];
        if a00.is_zero() {
            return Err(Error::SingularSeries);
        }
        let n = self.order;
        let inv0 = T::one() / a00.clone();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for d in 1..=n {
            for j in 0..=d {
                let i = d - j;
                let mut acc = T::zero();
                for d1 in 1..=d {
                    for j1 in 0..=d1.min(j) {
                        let i1 = d1 - j1;
                        if i1 > i {
                            continue;
                        }
                        let a = &self.coeffs[slot(i1, j1)];
                        if a.is_zero() {
                            continue;
                        }
                        acc = acc + a.clone() * out.coeffs[slot(i - i1, j - j1)].clone();
                    }
                }
                out.coeffs[slot(i, j)] = -(acc * inv0.clone());
            }
        }
        out.parity = match self.parity {
            Parity::Even => Parity::Even,
            _ => Parity::Mixed,
        };
        out.debug_check();
        Ok(out)
    }

    /// Applies the Euler operator `r ∂_r + t ∂_t`, which scales each
    /// homogeneous part of degree `d` by `d`.
    pub fn euler(&self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in self.terms() {
            if !c.is_zero() {
                out.coeffs[slot(i, j)] = c.clone() * T::from_int((i + j) as i64);
            }
        }
        out
    }

    /// `arctan(a) − arctan(a₀₀)`, built by formal integration of
    /// `da / (1 + a²)` degree by degree. Works in every coefficient field.
    pub fn arctan_increment(&self) -> Self {
        let n = self.order;
        let denom = (&Self::one(n) + &self.mul_series(self))
            .reciprocal()
            .expect("1 + a^2 has unit-or-larger constant term");
        let integrand = self.euler().mul_series(&denom);
        let mut out = Self::zero(n);
        for (i, j, c) in integrand.terms() {
            let d = i + j;
            if d > 0 && !c.is_zero() {
                out.coeffs[slot(i, j)] = c.clone() / T::from_int(d as i64);
            }
        }
        out.parity = match self.parity {
            Parity::Even => Parity::Even,
            Parity::Odd => Parity::Odd,
            Parity::Mixed => Parity::Mixed,
        };
        out.debug_check();
        out
    }

    /// Full arctangent series; the constant term must have an exact
    /// arctangent in the coefficient field.
    pub fn arctan(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .atan()
            .ok_or_else(|| Error::NonRationalConstant(self.coeffs[0].to_string()))?;
        let mut out = self.arctan_increment();
        if !c0.is_zero() && out.parity == Parity::Odd {
            out.parity = Parity::Mixed;
        }
        out.coeffs[0] = c0;
        Ok(out)
    }

    /// Formal `∂/∂r`; the order drops by one.
    pub fn d_r(&self) -> Self {
        let n = self.order.saturating_sub(1);
        let mut out = Self::zero(n);
        if self.order == 0 {
            return out;
        }
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                let c = &self.coeffs[slot(i + 1, j)];
                if !c.is_zero() {
                    out.coeffs[slot(i, j)] = c.clone() * T::from_int((i + 1) as i64);
                }
            }
        }
        out.parity = self.parity.flip();
        out.debug_check();
        out
    }

    /// Formal `∂/∂t`; the order drops by one.
    pub fn d_t(&self) -> Self {
        let n = self.order.saturating_sub(1);
        let mut out = Self::zero(n);
        if self.order == 0 {
            return out;
        }
        for d in 0..=n {
            for j in 0..=d {
                let c = &self.coeffs[slot(d - j, j + 1)];
                if !c.is_zero() {
                    out.coeffs[slot(d - j, j)] = c.clone() * T::from_int((j + 1) as i64);
                }
            }
        }
        out.parity = self.parity;
        out.debug_check();
        out
    }

    /// Exact division by `r`; every `r^0 t^j` coefficient must vanish.
    /// The order drops by one.
    pub fn div_r(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderExhausted("div_r on an order-0 series".into()));
        }
        for j in 0..=self.order {
            if !self.coeffs[slot(0, j)].is_zero() {
                return Err(Error::NotDivisibleByR {
                    order: self.order,
                    j,
                });
            }
        }
        let n = self.order - 1;
        let mut out = Self::zero(n);
        for d in 0..=n {
            for j in 0..=d {
                out.coeffs[slot(d - j, j)] = self.coeffs[slot(d - j + 1, j)].clone();
            }
        }
        out.parity = self.parity.flip();
        out.debug_check();
        Ok(out)
    }

    /// Largest coefficient magnitude over total degrees `≤ max_degree`.
    pub fn max_abs_through(&self, max_degree: usize) -> f64 {
        self.terms()
            .filter(|(i, j, _)| i + j <= max_degree)
            .map(|(_, _, c)| c.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> TruncatedSeries<f64> {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
            parity: self.parity,
        }
    }

    /// Horner-free direct evaluation at `(r, t)` in floating point.
    pub fn eval(&self, r: f64, t: f64) -> f64 {
        let mut rp = vec![1.0; self.order + 1];
        let mut tp = vec![1.0; self.order + 1];
        for k in 1..=self.order {
            rp[k] = rp[k - 1] * r;
            tp[k] = tp[k - 1] * t;
        }
        self.terms()
            .map(|(i, j, c)| c.to_f64() * rp[i] * tp[j])
            .sum()
    }

    /// CSV dump, one `i,j,coeff` row per stored monomial, sorted by `(i, j)`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,coeff\n");
        for (i, j, c) in self.terms() {
            let _ = writeln!(s, "{i},{j},{c}");
        }
        s
    }
}

/// Equality of order and coefficients; the parity flag is bookkeeping.
impl<T: Scalar> PartialEq for TruncatedSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

fn combine_parity<T: Scalar>(a: &TruncatedSeries<T>, b: &TruncatedSeries<T>) -> Parity {
    if b.is_zero_series() {
        a.parity
    } else if a.is_zero_series() {
        b.parity
    } else {
        a.parity.sum(b.parity)
    }
}

impl<T: Scalar> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c = c.clone() + rhs.coeffs[k].clone();
        }
        out.parity = combine_parity(self, rhs);
        out
    }
}

impl<T: Scalar> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c = c.clone() - rhs.coeffs[k].clone();
        }
        out.parity = combine_parity(self, rhs);
        out
    }
}

impl<T: Scalar> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        self.mul_series(rhs)
    }
}

impl<T: Scalar> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> TruncatedSeries<T> {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            parity: self.parity,
        }
    }
}
