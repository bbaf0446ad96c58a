use std::f64::consts::FRAC_PI_2;

use hamstat::dense::sym_eigenvalues;
use hamstat::geometry::PotentialField;
use hamstat::jets::Scalar;
use hamstat::sampling;
use hamstat::singular::{
    cauchy_jet_solve, cauchy_jet_solve_in, default_radius, eigen_bound_violation, model_potential, phi,
    singular_graph_sample, validated_radius, FamilyIndex,
};
use hamstat::Strategy;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_bounds_inside_validated_ball(k in 1usize..4, n in 3usize..6, r in 0.0f64..1.0, a in 0.0f64..FRAC_PI_2) {
        let idx = FamilyIndex::new(n, k).unwrap();
        let rho = default_radius(idx);
        let w = model_potential(idx, rho).unwrap().into_field();
        let (pr, pt) = (r * rho * a.cos(), r * rho * a.sin());
        prop_assert!(eigen_bound_violation(idx, &w, pr, pt) <= 0.0);
    }

    #[test]
    fn eigenvalues_below_one_off_origin(seed in 0u64..10_000, k in 1usize..3) {
        let idx = FamilyIndex::new(3, k).unwrap();
        let w = model_potential(idx, 0.1).unwrap().into_field();
        let x = sampling::points_in_ball(seed, 3, 0.1, 1).pop().unwrap();
        let top = *sym_eigenvalues(&w.hessian(&x)).last().unwrap();
        prop_assert!(top < 1.0);
    }

    #[test]
    fn rotated_phase_is_hypercritical(seed in 0u64..10_000, n in 3usize..5, k in 1usize..3) {
        let idx = FamilyIndex::new(n, k).unwrap();
        let w = model_potential(idx, 0.1).unwrap().into_field();
        let pts = sampling::points_in_ball(seed, n, 0.1, 50);
        let s = singular_graph_sample(idx, &w, &pts, Strategy::Sequential).unwrap();
        prop_assert!(s.points.iter().all(|p| p.theta_bar > (n as f64 - 1.0) * FRAC_PI_2));
        for (p, x) in s.points.iter().zip(&pts) {
            let (xb, yb) = phi(&w, x);
            for i in 0..n {
                prop_assert!((p.x_bar[i] - xb[i]).abs() < 1e-15);
                prop_assert!((p.y_bar[i] - yb[i]).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn validated_radius_is_positive_and_capped() {
    for k in 1..=3 {
        let idx = FamilyIndex::new(3, k).unwrap();
        let rv = validated_radius(idx);
        assert!(rv > 0.15 && rv <= 0.3, "k={k}: {rv}");
        assert!(default_radius(idx) <= 0.2);
    }
}

#[test]
fn pivots_nonzero_across_family() {
    for n in 3..=5 {
        for k in 1..=3 {
            let idx = FamilyIndex::new(n, k).unwrap();
            let jet = cauchy_jet_solve(idx, 2 * k + 2).unwrap();
            assert!(jet.pivots.iter().all(|p| !Scalar::is_zero(&p.value)));
            assert!(jet.residual_series().unwrap().is_zero_series());
            assert!(jet.series.is_even_in_r());
        }
    }
}

#[test]
fn float_jet_tracks_rational_jet() {
    let idx = FamilyIndex::new(4, 1).unwrap();
    let exact = cauchy_jet_solve(idx, 9).unwrap().series.to_f64();
    let float = cauchy_jet_solve_in::<f64>(idx, 9).unwrap().series;
    let scale = exact.max_abs_through(9);
    assert!((&exact - &float).max_abs_through(9) < 1e-10 * scale);
}

#[test]
fn cauchy_data_is_reproduced() {
    let idx = FamilyIndex::new(3, 2).unwrap();
    let jet = cauchy_jet_solve(idx, 8).unwrap();
    let trace0: Vec<(usize, f64)> = jet.cauchy_trace(0).into_iter().map(|(i, c)| (i, c.to_f64())).collect();
    assert_eq!(trace0, vec![(2, 0.5), (6, -1.0)]);
    assert!(jet.cauchy_trace(1).is_empty());
    let trace2: Vec<(usize, f64)> = jet.cauchy_trace(2).into_iter().map(|(i, c)| (i, c.to_f64())).collect();
    assert_eq!(trace2, vec![(2, -2.0)]);
    assert!(jet.cauchy_trace(3).is_empty());
}

#[test]
fn pointwise_residual_decays_at_formal_order() {
    let idx = FamilyIndex::new(3, 1).unwrap();
    let jet = cauchy_jet_solve(idx, 8).unwrap();
    let rhos = [0.1, 0.05, 0.025];
    let logs: Vec<f64> = rhos.iter().map(|&r| jet.residual_sup(r, 16).unwrap().log2()).collect();
    let s1 = logs[0] - logs[1];
    let s2 = logs[1] - logs[2];
    assert!(s1 >= 4.5 && s2 >= 4.5, "slopes {s1:.2} {s2:.2}");
    assert!(jet.residual_at(0.0, 0.0).unwrap().abs() < 1e-12);
}

#[test]
fn jet_potential_matches_series() {
    let idx = FamilyIndex::new(3, 1).unwrap();
    let jet = cauchy_jet_solve(idx, 8).unwrap();
    let u = jet.potential(0.2).unwrap();
    let v = jet.series.to_f64();
    let x = [0.03, 0.04, -0.05];
    assert!((u.value(&x) - v.eval(0.05, -0.05)).abs() < 1e-15);
}
