//! Reference implementations used only by the tests. They share no code
//! with the library beyond the public series constructors and accessors.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hamstat::jets::{Scalar, TruncatedSeries};

/// Cyclic Jacobi eigenvalue iteration for a dense symmetric matrix.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub type CoeffMap<T> = BTreeMap<(usize, usize), T>;

pub fn to_map<T: Scalar>(s: &TruncatedSeries<T>) -> CoeffMap<T> {
    s.terms().map(|(i, j, c)| ((i, j), c.clone())).collect()
}

/// Schoolbook Cauchy product on coefficient maps, truncated at `order`.
pub fn convolve<T: Scalar>(a: &CoeffMap<T>, b: &CoeffMap<T>, order: usize) -> CoeffMap<T> {
    let mut out: CoeffMap<T> = CoeffMap::new();
    for (&(i1, j1), x) in a {
        for (&(i2, j2), y) in b {
            if i1 + i2 + j1 + j2 > order {
                continue;
            }
            let e = out.entry((i1 + i2, j1 + j2)).or_insert_with(T::zero);
            *e = e.clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Series square root by the recurrence `2 s₀₀ s_{ij} = a_{ij} − Σ' s s`.
pub fn sqrt_series(a: &TruncatedSeries<f64>) -> TruncatedSeries<f64> {
    let n = a.order();
    let mut s: CoeffMap<f64> = CoeffMap::new();
    let s00 = a.coeff(0, 0).sqrt();
    s.insert((0, 0), s00);
    for d in 1..=n {
        for j in 0..=d {
            let i = d - j;
            let mut acc = a.coeff(i, j);
            for (&(p, q), v) in &s {
                if (p, q) == (0, 0) || p > i || q > j {
                    continue;
                }
                if let Some(w) = s.get(&(i - p, j - q)) {
                    if (i - p, j - q) != (0, 0) {
                        acc -= v * w;
                    }
                }
            }
            s.insert((i, j), acc / (2.0 * s00));
        }
    }
    let terms: Vec<(usize, usize, f64)> = s.into_iter().map(|((i, j), c)| (i, j, c)).collect();
    TruncatedSeries::from_terms(n, &terms)
}

type Ts = TruncatedSeries<f64>;

/// `√S · Δ_g Θ` in divergence form, assembled from the phase itself:
/// `Θ = (n−2) arctan μ + arctan(Y/X)`, `S = (1+μ²)^{n−2} det G`.
pub fn phase_laplacian_divergence_form(v: &Ts, n: usize) -> Ts {
    let one = Ts::one(v.order());
    let mu = v.d_r().div_r().expect("even profile");
    let a = v.d_r().d_r();
    let b = v.d_r().d_t();
    let c = v.d_t().d_t();
    let x = &one - &(&(&a * &c) - &(&b * &b));
    let y = &a + &c;
    let nm2 = (n - 2) as f64;
    let theta = &mu.arctan().unwrap().scale(&nm2) + &(&y * &x.reciprocal().unwrap()).arctan().unwrap();
    let th_r = theta.d_r();
    let th_t = theta.d_t();
    let g11 = &(&one + &(&a * &a)) + &(&b * &b);
    let g12 = &(&a * &b) + &(&b * &c);
    let g22 = &(&one + &(&b * &b)) + &(&c * &c);
    let det = &(&g11 * &g22) - &(&g12 * &g12);
    let det_inv = det.reciprocal().unwrap();
    let pr = &(&(&g22 * &th_r) - &(&g12 * &th_t)) * &det_inv;
    let pt = &(&(&g11 * &th_t) - &(&g12 * &th_r)) * &det_inv;
    let mut radial = Ts::one(v.order());
    let m1 = &one + &(&mu * &mu);
    for _ in 0..n - 2 {
        radial = &radial * &m1;
    }
    let root = sqrt_series(&(&radial * &det));
    let fr = &root * &pr;
    let ft = &root * &pt;
    &(&fr.d_r() + &fr.div_r().unwrap().scale(&nm2)) + &ft.d_t()
}
