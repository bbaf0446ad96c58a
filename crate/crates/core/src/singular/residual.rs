//! `Δ_g Θ` for an axisymmetric potential `u(x) = v(|x'|, xₙ)`, as a series.
//!
//! With `μ = v_r/r`, profile block `B = [[a, b], [b, c]] = D²_{(r,t)} v`,
//! `X = 1 − det B`, `Y = tr B` and `D = X² + Y² = det(I + B²)`:
//!
//! ```text
//! Θ   = (n−2)·arctan μ + arg(X + iY)
//! ∂Θ  = (n−2)·∂μ/(1+μ²) + (X ∂Y − Y ∂X)/D
//! P   = (I + B²)⁻¹ ∇Θ
//! ΔgΘ = ∂_r P_r + (n−2) P_r/r + ∂_t P_t + ½ P·∇((n−2) log(1+μ²) + log D)
//! ```
//!
//! No arctangent is evaluated, so the assembly runs in exact arithmetic.

use crate::jets::{Scalar, TruncatedSeries};
use crate::error::{Error, Result};

type Ts<T> = TruncatedSeries<T>;

/// Assembles `Δ_g Θ` given `v`, the series of `μ = v_r/r` and a rule for
/// dividing the odd series `P_r` by `r`. The result has order `order(v) − 4`.
pub(crate) fn assemble<T, F>(v: &Ts<T>, mu: &Ts<T>, n: usize, pr_over_r: F) -> Result<Ts<T>>
where
    T: Scalar,
    F: Fn(&Ts<T>) -> Result<Ts<T>>,
{
    if v.order() < 4 {
        return Err(Error::OrderExhausted(format!(
            "phase Laplacian needs order >= 4, got {}",
            v.order()
        )));
    }
    let nm2 = T::from_int(n as i64 - 2);
    let half = T::from_ratio(1, 2);
    let one = Ts::one(v.order());

    let vr = v.d_r();
    let vt = v.d_t();
    let a = vr.d_r();
    let b = vr.d_t();
    let c = vt.d_t();

    let bb = &b * &b;
    let x = &one - &(&(&a * &c) - &bb);
    let y = &a + &c;
    let d = &(&x * &x) + &(&y * &y);
    let dinv = d.reciprocal()?;
    let mu2 = mu * mu;
    let m1inv = (&one + &mu2).reciprocal()?;

    let dtheta = |dmu: &Ts<T>, dx: &Ts<T>, dy: &Ts<T>| -> Ts<T> {
        let radial = (dmu * &m1inv).scale(&nm2);
        let block = &(&(&x * dy) - &(&y * dx)) * &dinv;
        &radial + &block
    };
    let th_r = dtheta(&mu.d_r(), &x.d_r(), &y.d_r());
    let th_t = dtheta(&mu.d_t(), &x.d_t(), &y.d_t());

    let g11 = &(&one + &(&a * &a)) + &bb;
    let g12 = &b * &y;
    let g22 = &(&one + &bb) + &(&c * &c);
    let pr = &(&(&g22 * &th_r) - &(&g12 * &th_t)) * &dinv;
    let pt = &(&(&g11 * &th_t) - &(&g12 * &th_r)) * &dinv;

    let dlog = |dmu2: &Ts<T>, dd: &Ts<T>| -> Ts<T> { &(dmu2 * &m1inv).scale(&nm2) + &(dd * &dinv) };
    let l_r = dlog(&mu2.d_r(), &d.d_r());
    let l_t = dlog(&mu2.d_t(), &d.d_t());

    let div = &(&pr.d_r() + &pr_over_r(&pr)?.scale(&nm2)) + &pt.d_t();
    let drift = (&(&pr * &l_r) + &(&pt * &l_t)).scale(&half);
    Ok(&div + &drift)
}

/// `Δ_g Θ` as a series about the origin of the `(r, t)` plane; `v` must be
/// even in `r`.
pub fn axisym_phase_laplacian<T: Scalar>(v: &Ts<T>, n: usize) -> Result<Ts<T>> {
    let mu = v.d_r().div_r()?;
    assemble(v, &mu, n, |p| p.div_r())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Taylor expansion of the polynomial `p` about `(r₀, t₀)`, truncated at
/// total degree `order`, in the shifted variables.
pub fn reexpand(p: &Ts<f64>, r0: f64, t0: f64, order: usize) -> Ts<f64> {
    let mut terms = Vec::new();
    for (i, j, c) in p.terms() {
        if *c == 0.0 {
            continue;
        }
        for a in 0..=i.min(order) {
            let ca = c * binomial(i, a) * r0.powi((i - a) as i32);
            if ca == 0.0 {
                continue;
            }
            for b in 0..=j.min(order - a) {
                terms.push((a, b, ca * binomial(j, b) * t0.powi((j - b) as i32)));
            }
        }
    }
    Ts::from_terms(order, &terms)
}

/// Pointwise `Δ_g Θ` of the polynomial profile `v` at `(r₀, t₀)`, `r₀ ≥ 0`.
///
/// `μ = v_r/r` is divided globally (exact for an even polynomial) before
/// re-expansion, so points close to the axis lose no accuracy.
pub(crate) fn pointwise(v: &Ts<f64>, n: usize, r0: f64, t0: f64) -> Result<f64> {
    const LOCAL: usize = 4;
    let mu_global = v.d_r().div_r()?;
    let v_loc = reexpand(v, r0, t0, LOCAL);
    let mu_loc = reexpand(&mu_global, r0, t0, LOCAL);
    let res = if r0 == 0.0 {
        assemble(&v_loc, &mu_loc, n, |p| p.div_r())?
    } else {
        // only the constant term of P_r/r reaches the value
        assemble(&v_loc, &mu_loc, n, |p| Ok(Ts::constant(p.coeff(0, 0) / r0, 0)))?
    };
    Ok(res.coeff(0, 0))
}
