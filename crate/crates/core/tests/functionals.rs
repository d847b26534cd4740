mod common;

use common::*;
use proptest::prelude::*;
use quasiquad::functionals::{
    family_recurrence, moments_from_recurrence, orthogonalize, FamilySpec,
};
use quasiquad::{MomentFunctional, Rational, RecurrenceCoefficients};

/// Worst relative error, `beta` measured against `max(|beta|, sqrt(gamma))`.
fn rc_error(a: &RecurrenceCoefficients<f64>, b: &RecurrenceCoefficients<f64>, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let scale = b.beta(i).abs().max(b.gamma(i.max(1)).sqrt());
        worst = worst.max((a.beta(i) - b.beta(i)).abs() / scale);
    }
    for i in 1..n {
        worst = worst.max((a.gamma(i) - b.gamma(i)).abs() / b.gamma(i));
    }
    worst
}

fn float_round_trip(spec: &FamilySpec<f64>, n: usize) -> (f64, f64) {
    let rc = family_recurrence::<f64>(spec, n + 1).unwrap();
    let m = moments_from_recurrence(&rc, 2 * n + 1).unwrap();
    let float = rc_error(&orthogonalize(&m, n).unwrap().rc, &rc, n);
    // the same algorithm in exact arithmetic on the rounded moments
    let exact = MomentFunctional::new(
        m.moments()
            .iter()
            .map(|x| Rational::from_float(*x).unwrap())
            .collect(),
    )
    .unwrap();
    let floor = rc_error(
        &orthogonalize(&exact, n).unwrap().rc.to_f64().unwrap(),
        &rc,
        n,
    );
    (float, floor)
}

#[test]
fn float_round_trip_to_1e12() {
    let cases: Vec<(FamilySpec<f64>, usize)> = vec![
        (FamilySpec::ChebyshevU, 12),
        (FamilySpec::ChebyshevV, 12),
        (FamilySpec::ChebyshevW, 12),
        (FamilySpec::TwoPeriodic { a: 1.0, b: 2.0 }, 12),
        (FamilySpec::Laguerre { alpha: 0.0 }, 10),
        (FamilySpec::TwoPeriodic { a: 0.3, b: 2.0 }, 8),
    ];
    for (spec, top) in cases {
        for n in 1..=top {
            let (err, _) = float_round_trip(&spec, n);
            assert!(err <= 1e-12, "{} n={n}: {err:e}", spec.name());
        }
    }
}

#[test]
fn float_round_trip_is_limited_by_the_data() {
    let cases: Vec<FamilySpec<f64>> = vec![
        FamilySpec::Laguerre { alpha: 0.0 },
        FamilySpec::Laguerre { alpha: 1.5 },
        FamilySpec::TwoPeriodic { a: 0.3, b: 2.0 },
    ];
    for spec in cases {
        for n in 8..=12 {
            let (err, floor) = float_round_trip(&spec, n);
            assert!(
                err <= 10.0 * floor.max(1e-15),
                "{} n={n}: {err:e} vs {floor:e}",
                spec.name()
            );
        }
    }
}

#[test]
fn laguerre_moments_are_factorials() {
    let rc = family(&FamilySpec::Laguerre { alpha: q(0, 1) }, 12);
    let m = moments_from_recurrence(&rc, 20).unwrap();
    let mut f = q(1, 1);
    for (n, u) in m.moments().iter().enumerate() {
        if n > 0 {
            f *= q(n as i64, 1);
        }
        assert_eq!(u, &f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rational_round_trip_is_exact(
        n in 1usize..=10,
        betas in prop::collection::vec((-5i64..=5, 1i64..=4), 11),
        gammas in prop::collection::vec((1i64..=6, 1i64..=4), 10),
    ) {
        let rc = RecurrenceCoefficients::new(
            betas[..=n].iter().map(|(a, b)| q(*a, *b)).collect(),
            gammas[..n].iter().map(|(a, b)| q(*a, *b)).collect(),
        ).unwrap();
        let m = moments_from_recurrence(&rc, 2 * n + 1).unwrap();
        let back = orthogonalize(&m, n).unwrap();
        prop_assert_eq!(back.rc, rc.truncate(n - 1).unwrap());
        prop_assert_eq!(back.polys, rc.polys(n).unwrap());
        let norms = rc.norms(n - 1, &m.moments()[0]).unwrap();
        prop_assert_eq!(back.norms, norms);
        prop_assert!(m.is_positive_definite_through(n).unwrap());
    }
}
