use num_rational::BigRational;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::residual::{axisym_phase_laplacian, pointwise};
use super::FamilyIndex;
use crate::error::{Error, Result};
use crate::geometry::{AxisymPolynomial, FieldKind};
use crate::jets::{Scalar, TruncatedSeries};

/// Cost guard on the jet order.
pub const MAX_JET_ORDER: usize = 14;

/// Coefficient of `∂/∂c_{i,j}` in the residual row that determines `c_{i,j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pivot<T: Scalar> {
    pub i: usize,
    pub j: usize,
    pub value: T,
}

/// Finite-order formal solution `v(r, t)` of the axisymmetric Cauchy
/// problem, with `u(x) = v(|x'|, xₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSolution<T: Scalar = BigRational> {
    pub index: FamilyIndex,
    pub order: usize,
    pub series: TruncatedSeries<T>,
    /// One entry per solved coefficient, in solve order.
    pub pivots: Vec<Pivot<T>>,
}

fn cauchy_data<T: Scalar>(idx: FamilyIndex, order: usize) -> TruncatedSeries<T> {
    TruncatedSeries::from_terms(
        order,
        &[
            (2, 0, T::from_ratio(1, 2)),
            (2 * idx.k + 2, 0, T::from_int(-1)),
            (2, 2, T::from_int(-1)),
        ],
    )
}

/// Exact rational jet of order `N ∈ [max(4, 2k+2), 14]`.
pub fn cauchy_jet_solve(idx: FamilyIndex, order: usize) -> Result<JetSolution> {
    cauchy_jet_solve_in::<BigRational>(idx, order)
}

/// Jet solve in a chosen coefficient field.
///
/// Coefficients `c_{i,j}`, `j ≥ 4`, are fixed degree by degree. Within
/// degree `d` the residual row `(i, j)`, `i + j = d`, is affine in
/// `c_{i,j+4}` once the rows with smaller `j` are solved, so two residual
/// evaluations give both the pivot and the solution.
pub fn cauchy_jet_solve_in<T: Scalar>(idx: FamilyIndex, order: usize) -> Result<JetSolution<T>> {
    let min_order = 4.max(2 * idx.k + 2);
    if order < min_order || order > MAX_JET_ORDER {
        return Err(Error::InvalidParameter(format!(
            "jet order {order} outside [{min_order}, {MAX_JET_ORDER}] for k = {}",
            idx.k
        )));
    }
    let mut v = cauchy_data::<T>(idx, order);
    let mut pivots = Vec::new();
    for d in 0..=order - 4 {
        for j in 0..=d {
            let i = d - j;
            if i % 2 == 1 {
                continue;
            }
            let row = |c: T| -> Result<T> {
                let mut w = v.truncate(d + 4);
                w.set(i, j + 4, c);
                Ok(axisym_phase_laplacian(&w, idx.n)?.coeff(i, j))
            };
            let r0 = row(T::zero())?;
            let pivot = row(T::one())? - r0.clone();
            if pivot.is_zero() {
                return Err(Error::VanishingPivot { i, j: j + 4 });
            }
            v.set(i, j + 4, -(r0 / pivot.clone()));
            pivots.push(Pivot {
                i,
                j: j + 4,
                value: pivot,
            });
        }
    }
    Ok(JetSolution {
        index: idx,
        order,
        series: v,
        pivots,
    })
}

impl<T: Scalar> JetSolution<T> {
    /// `∂_t^j v(r, 0)` as `(i, coefficient of r^i)` pairs, `j ≤ 3`.
    pub fn cauchy_trace(&self, j: usize) -> Vec<(usize, T)> {
        let fact = (1..=j).product::<usize>() as i64;
        (0..=self.order.saturating_sub(j))
            .map(|i| (i, self.series.coeff(i, j) * T::from_int(fact)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Residual series of `Δ_g Θ`; vanishes through degree `order − 4`.
    pub fn residual_series(&self) -> Result<TruncatedSeries<T>> {
        axisym_phase_laplacian(&self.series, self.index.n)
    }

    /// `Δ_g Θ` of the truncated polynomial at `(r, t)`, `r ≥ 0`.
    pub fn residual_at(&self, r: f64, t: f64) -> Result<f64> {
        pointwise(&self.series.to_f64(), self.index.n, r, t)
    }

    /// Max of `|Δ_g Θ|` over a polar grid of the profile half-disk of radius `ρ`.
    pub fn residual_sup(&self, rho: f64, per_axis: usize) -> Result<f64> {
        let v = self.series.to_f64();
        let mut sup = 0.0f64;
        for ir in 1..=per_axis {
            let rad = rho * ir as f64 / per_axis as f64;
            for ia in 0..=per_axis {
                let th = std::f64::consts::PI * (ia as f64 / per_axis as f64 - 0.5);
                let (r, t) = (rad * th.cos().max(0.0), rad * th.sin());
                sup = sup.max(pointwise(&v, self.index.n, r, t)?.abs());
            }
        }
        Ok(sup)
    }

    /// The jet as a potential on `B_radius ⊂ ℝⁿ`.
    pub fn potential(&self, radius: f64) -> Result<AxisymPolynomial> {
        AxisymPolynomial::from_even_series(
            self.index.n,
            radius,
            FieldKind::JetBacked {
                n: self.index.n,
                k: self.index.k,
                order: self.order,
            },
            &self.series,
        )
    }
}

impl<T: Scalar> Serialize for JetSolution<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<(usize, usize, f64)> = self
            .series
            .terms()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| (i, j, c.to_f64()))
            .collect();
        let pivots: Vec<f64> = self.pivots.iter().map(|p| p.value.to_f64()).collect();
        let mut st = s.serialize_struct("JetSolution", 5)?;
        st.serialize_field("n", &self.index.n)?;
        st.serialize_field("k", &self.index.k)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("pivots", &pivots)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Scalar>::from_ratio(n, d)
    }

    #[test]
    fn low_order_block_is_the_model() {
        let idx = FamilyIndex::new(3, 1).unwrap();
        let jet = cauchy_jet_solve(idx, 6).unwrap();
        assert_eq!(jet.series.coeff(2, 0), rat(1, 2));
        assert_eq!(jet.series.coeff(4, 0), rat(-1, 1));
        assert_eq!(jet.series.coeff(2, 2), rat(-1, 1));
        for i in 0..=3 {
            assert!(Scalar::is_zero(&jet.series.coeff(i, 3)));
            assert!(Scalar::is_zero(&jet.series.coeff(i, 1)));
        }
        assert!(jet.series.is_even_in_r());
    }

    #[test]
    fn exact_residual_vanishes() {
        let idx = FamilyIndex::new(3, 1).unwrap();
        let jet = cauchy_jet_solve(idx, 7).unwrap();
        let r = jet.residual_series().unwrap();
        assert!(r.is_zero_series());
        assert!(jet.pivots.iter().all(|p| !Scalar::is_zero(&p.value)));
    }

    #[test]
    fn order_guard() {
        let idx = FamilyIndex::new(3, 2).unwrap();
        assert!(cauchy_jet_solve(idx, 5).is_err());
        assert!(cauchy_jet_solve(idx, 15).is_err());
    }

    #[test]
    fn traces_round_trip() {
        let idx = FamilyIndex::new(4, 1).unwrap();
        let jet = cauchy_jet_solve(idx, 6).unwrap();
        assert_eq!(jet.cauchy_trace(0), vec![(2, rat(1, 2)), (4, rat(-1, 1))]);
        assert!(jet.cauchy_trace(1).is_empty());
        assert_eq!(jet.cauchy_trace(2), vec![(2, rat(-2, 1))]);
        assert!(jet.cauchy_trace(3).is_empty());
    }

    #[test]
    fn json_shape() {
        let idx = FamilyIndex::new(3, 1).unwrap();
        let jet = cauchy_jet_solve(idx, 5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&jet).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["order"], 5);
        assert!(v["coeffs"]
            .as_array()
            .unwrap()
            .contains(&serde_json::json!([2, 0, 0.5])));
        assert_eq!(v["pivots"].as_array().unwrap().len(), jet.pivots.len());
    }
}
