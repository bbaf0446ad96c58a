//! Truncated bivariate power series in `(r, t)`.
//!
//! This is the kernel of the Cauchy jet solver: values are immutable once
//! built, every operation is pure, and the coefficient field is either `f64`
//! or an exact [`BigRational`](num_rational::BigRational).

mod scalar;
mod series;

pub use scalar::Scalar;
pub use series::{Parity, TruncatedSeries};

/// Exact-mode series.
pub type RationalSeries = TruncatedSeries<num_rational::BigRational>;
