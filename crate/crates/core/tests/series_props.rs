use hamstat::jets::{Parity, Scalar, TruncatedSeries};
use num_rational::BigRational;
use proptest::prelude::*;

type Q = TruncatedSeries<BigRational>;

fn q(n: i64, d: i64) -> BigRational {
    <BigRational as Scalar>::from_ratio(n, d)
}

fn series(order: usize, coeffs: &[i64]) -> Q {
    let mut terms = Vec::new();
    let mut it = coeffs.iter().cycle();
    for d in 0..=order {
        for j in 0..=d {
            terms.push((d - j, j, q(*it.next().unwrap(), 3)));
        }
    }
    Q::from_terms(order, &terms)
}

fn even_series(order: usize, coeffs: &[i64]) -> Q {
    let s = series(order, coeffs);
    let terms: Vec<_> = s.terms().filter(|(i, _, _)| i % 2 == 0).map(|(i, j, c)| (i, j, c.clone())).collect();
    Q::from_terms(order, &terms)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in coeffs(), b in coeffs(), c in coeffs(), order in 1usize..6) {
        let (a, b, c) = (series(order, &a), series(order, &b), series(order, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Q::zero(order));
        prop_assert_eq!(&a * &Q::one(order), a.clone());
    }

    #[test]
    fn leibniz_rule(a in coeffs(), b in coeffs(), order in 2usize..7) {
        let (a, b) = (series(order, &a), series(order, &b));
        let ab = &a * &b;
        prop_assert_eq!(ab.d_r(), &(&a.d_r() * &b) + &(&a * &b.d_r()));
        prop_assert_eq!(ab.d_t(), &(&a.d_t() * &b) + &(&a * &b.d_t()));
    }

    #[test]
    fn parity_is_tracked(a in coeffs(), b in coeffs(), order in 2usize..7) {
        let (a, b) = (even_series(order, &a), even_series(order, &b));
        prop_assert_eq!(a.parity(), Parity::Even);
        prop_assert_eq!((&a * &b).parity(), Parity::Even);
        prop_assert!(a.d_t().is_even_in_r());
        let ar = a.d_r();
        prop_assert!(ar.terms().all(|(i, _, c)| i % 2 == 1 || Scalar::is_zero(c)));
        let mu = ar.div_r().unwrap();
        prop_assert!(mu.is_even_in_r());
    }

    #[test]
    fn reciprocal_inverts(a in coeffs(), c0 in 1i64..5, order in 1usize..6) {
        let mut a = series(order, &a);
        a.set(0, 0, q(c0, 1));
        prop_assert_eq!(&a.reciprocal().unwrap() * &a, Q::one(order));
    }

    #[test]
    fn div_r_undoes_multiplication(a in coeffs(), order in 1usize..6) {
        let a = series(order, &a);
        let r = Q::var_r(order + 1);
        let lifted = Q::from_terms(order + 1, &a.terms().map(|(i, j, c)| (i, j, c.clone())).collect::<Vec<_>>());
        let back = (&r * &lifted).div_r().unwrap();
        prop_assert_eq!(back.truncate(order), a);
    }

    #[test]
    fn float_and_rational_agree(a in coeffs(), b in coeffs(), order in 1usize..6) {
        let (a, b) = (series(order, &a), series(order, &b));
        let exact = (&a * &b).to_f64();
        let float = &a.to_f64() * &b.to_f64();
        prop_assert!((&exact - &float).max_abs_through(order) < 1e-12);
    }
}

#[test]
fn arctan_of_t_is_odd_in_t() {
    let t = TruncatedSeries::<f64>::var_t(7);
    let at = t.arctan().unwrap();
    assert!((at.coeff(0, 1) - 1.0).abs() < 1e-15);
    assert!((at.coeff(0, 3) + 1.0 / 3.0).abs() < 1e-15);
    assert!((at.coeff(0, 5) - 0.2).abs() < 1e-15);
    assert_eq!(at.coeff(0, 2), 0.0);
}

#[test]
fn mismatched_orders() {
    let a = TruncatedSeries::<f64>::one(3);
    let b = TruncatedSeries::<f64>::one(4);
    assert!(a.checked_mul(&b).is_err());
    assert_eq!((&a * &b).order(), 3);
}
