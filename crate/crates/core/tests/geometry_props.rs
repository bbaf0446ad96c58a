mod oracle;

use std::f64::consts::FRAC_PI_2;

use hamstat::dense::sym_eigenvalues;
use hamstat::geometry::{
    assemble_axisym_hessian, classify, phase_and_eigen, phase_gradient, theta_at, AxisymPolynomial, Criticality,
    FieldKind, PotentialField,
};
use hamstat::sampling;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn random_axisym(seed: u64, n: usize) -> AxisymPolynomial {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    let mut terms = Vec::new();
    for m in 0..=3 {
        for j in 0..=3 {
            if m + j >= 1 {
                terms.push((m, j, rng.random_range(-1.0..1.0)));
            }
        }
    }
    AxisymPolynomial::new(n, 1.0, FieldKind::Custom, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_is_orthogonally_invariant(seed in 0u64..10_000, n in 2usize..7) {
        let mut rng = sampling::rng(seed);
        let h = sampling::symmetric(&mut rng, n, 2.0);
        let q = sampling::orthogonal(&mut rng, n);
        let hq = &q * &h * q.transpose();
        let hq = (&hq + hq.transpose()) * 0.5;
        let a = phase_and_eigen(&h, 0.0).unwrap();
        let b = phase_and_eigen(&hq, 0.0).unwrap();
        prop_assert!((a.theta - b.theta).abs() < 1e-10);
        prop_assert!((a.sqrt_det_g - b.sqrt_det_g).abs() < 1e-9 * a.sqrt_det_g);
    }

    #[test]
    fn classification_is_monotone(a in 0.0f64..10.0, b in 0.0f64..10.0, n in 2usize..7, delta in 0.0f64..0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(classify(lo, n, delta) <= classify(hi, n, delta));
        prop_assert_eq!(classify(-hi, n, delta), classify(hi, n, delta));
    }

    #[test]
    fn metric_is_identity_plus_square(seed in 0u64..10_000, n in 1usize..6) {
        let mut rng = sampling::rng(seed);
        let h = sampling::symmetric(&mut rng, n, 1.0);
        let rep = phase_and_eigen(&h, 0.0).unwrap();
        let g = DMatrix::identity(n, n) + &h * &h;
        prop_assert!((&rep.metric - &g).amax() < 1e-14);
        prop_assert!((&rep.metric * &rep.metric_inv - DMatrix::identity(n, n)).amax() < 1e-12);
        let prod: f64 = rep.eigenvalues.iter().map(|l| (1.0 + l * l).sqrt()).product();
        prop_assert!((rep.sqrt_det_g - prod).abs() < 1e-12 * prod);
    }

    #[test]
    fn axisym_assembly_matches_cartesian(seed in 0u64..10_000, n in 3usize..7) {
        let u = random_axisym(seed, n);
        let mut rng = sampling::rng(seed + 1);
        let x = sampling::point_in_ball(&mut rng, n, 0.8);
        let r = x[..n - 1].iter().map(|v| v * v).sum::<f64>().sqrt();
        let omega: Vec<f64> = x[..n - 1].iter().map(|v| v / r).collect();
        let assembled = assemble_axisym_hessian(&u.axis_point(r, x[n - 1]), &omega).unwrap();
        prop_assert!((assembled - u.hessian(&x)).amax() < 1e-12);
    }
}

#[test]
fn dense_spectrum_matches_jacobi() {
    let mut rng = sampling::rng(3);
    for n in 1..8 {
        let h = sampling::symmetric(&mut rng, n, 3.0);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| h[(i, j)]).collect()).collect();
        let want = oracle::jacobi_eigenvalues(&rows);
        let got = sym_eigenvalues(&h);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn phase_gradient_matches_finite_differences() {
    for n in [2, 3, 5] {
        let u = random_axisym(11 + n as u64, n);
        let x: Vec<f64> = (0..n).map(|i| 0.1 + 0.07 * i as f64).collect();
        let grad = phase_gradient(&u.hessian(&x), &u.third(&x).unwrap());
        let e = 1e-5;
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += e;
            xm[j] -= e;
            let fd = (theta_at(&u, &xp) - theta_at(&u, &xm)) / (2.0 * e);
            assert!((fd - grad[j]).abs() < 1e-7, "n={n} j={j}: {fd} vs {}", grad[j]);
        }
    }
}

#[test]
fn classification_examples() {
    assert_eq!(classify(3.0 * FRAC_PI_2 / 1.5, 3, 0.0), Criticality::Hypercritical);
    assert_eq!(classify(FRAC_PI_2, 3, 0.0), Criticality::Critical);
    assert_eq!(classify(FRAC_PI_2 + 0.05, 3, 0.1), Criticality::Critical);
    assert_eq!(classify(FRAC_PI_2 + 0.2, 3, 0.1), Criticality::Supercritical);
    assert_eq!(classify(0.1, 3, 0.0), Criticality::Subcritical);
}
