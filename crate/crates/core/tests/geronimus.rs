mod common;

use common::*;
use proptest::prelude::*;
use quasiquad::functionals::{moments_from_recurrence, orthogonalize};
use quasiquad::geronimus::{
    connection_from_geronimus, explicit_leading_coefficient, h_ratio_check, leading_coefficient_at,
    norm_q, solve_h, stieltjes_residuals, stieltjes_t, u_moments_from_v, v_moments_from_u,
    GeronimusPoly,
};
use quasiquad::quasi::forward_propagate;
use quasiquad::{MomentFunctional, Poly, Rational};

/// `h = sum_{j<k} <u, Q_j> / <v, Q_j^2> Q_j`, with `<u, Q_j> = b_{j,j}`.
fn lemma_h(
    rc: &quasiquad::RecurrenceCoefficients<Rational>,
    table: &quasiquad::quasi::ConnectionTable<Rational>,
    qt: &quasiquad::quasi::QTilde<Rational>,
    v0: &Rational,
) -> Poly<Rational> {
    let k = table.k();
    let qs = table.q_polys(rc, k - 1).unwrap();
    (0..k).fold(Poly::zero(), |acc, j| {
        &acc + &qs[j].scale(&(table.b(j, j) / norm_q(qt, j, v0)))
    })
}

#[test]
fn solve_h_agrees_with_lemma_and_moments() {
    let mut r = rng(21);
    for (name, spec) in acceptance_families() {
        let rc = family(&spec, 16);
        for k in 1..=5 {
            let init = random_init(&mut r, k);
            let Ok((table, qt)) = forward_propagate(&rc, k, &init, 12) else {
                continue;
            };
            let v0 = q(3, 2);
            let h = solve_h(&rc, &table, &qt, k, &v0).unwrap();
            let h_next = solve_h(&rc, &table, &qt, k + 1, &v0).unwrap();
            assert_eq!(h, h_next, "{name} k={k}");
            assert_eq!(h.poly(), lemma_h(&rc, &table, &qt, &v0), "{name} k={k}");
            for n in k..=12 {
                assert_eq!(
                    &leading_coefficient_at(&rc, &table, &qt, n, &v0),
                    h.leading()
                );
            }
            if k >= 2 {
                let one = q(1, 1);
                let h1 = solve_h(&rc, &table, &qt, k, &one).unwrap();
                assert_eq!(
                    &explicit_leading_coefficient(&table, &qt, &one, &one).unwrap(),
                    h1.leading()
                );
                assert!(h_ratio_check(&rc, &table, &h, 11).unwrap().holds);
            }
            // u = h v on moments
            let v = moments_from_recurrence(&qt.rc_q, 2 * 12 + 1).unwrap();
            let u = moments_from_recurrence(&rc, 2 * 12 + 1).unwrap();
            let v1 = MomentFunctional::new(v.moments().to_vec()).unwrap();
            let hv = u_moments_from_v(&v1, &solve_h(&rc, &table, &qt, k, &q(1, 1)).unwrap());
            for (n, m) in hv.iter().enumerate().take(2 * 12 - k + 1) {
                assert_eq!(m, &u.moments()[n], "{name} k={k} n={n}");
            }
        }
    }
}

#[test]
fn geronimus_round_trip() {
    let rc = family(&acceptance_families()[2].1, 16);
    let init = vec![q(1, 2), q(-1, 3), q(2, 1), q(1, 5), q(1, 4), q(-3, 2)];
    let (table, qt) = forward_propagate(&rc, 4, &init, 12).unwrap();
    let h = solve_h(&rc, &table, &qt, 4, &q(1, 1)).unwrap();
    let v = moments_from_recurrence(&qt.rc_q, 6).unwrap();
    let u = moments_from_recurrence(&rc, 20).unwrap();
    let v_rebuilt = v_moments_from_u(&u, &h, &v.moments()[..3]).unwrap();
    let orth = orthogonalize(&v_rebuilt, 11).unwrap();
    assert_eq!(orth.rc, qt.rc_q.truncate(10).unwrap());
    // and back from (h, prefix) to the same table
    let fam = connection_from_geronimus(&rc, &h, &v.moments()[..3], 10).unwrap();
    assert_eq!(fam.init, init);
    assert_eq!(fam.qt.rc_q, qt.rc_q.truncate(10).unwrap());
}

#[test]
fn stieltjes_series() {
    let rc = family(&acceptance_families()[0].1, 16);
    let h = GeronimusPoly::new(vec![q(1, 2), q(0, 1), q(2, 1)]).unwrap();
    let u = moments_from_recurrence(&rc, 20).unwrap();
    let prefix = [q(1, 1), q(-1, 3)];
    let v = v_moments_from_u(&u, &h, &prefix).unwrap();
    let res = stieltjes_residuals(&h, &v, &u, 10).unwrap();
    assert!(res.iter().all(|r| r == &q(0, 1)));
    let t = stieltjes_t(&h, &prefix).unwrap();
    // T(z) = h_1 v_0 + h_2 (v_0 z + v_1)
    assert_eq!(t.t_poly, Poly::new(vec![q(-2, 3), q(2, 1)]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn functional_identity(k in 2usize..=4, seed in 0u64..1000) {
        let mut r = rng(seed);
        let rc = family(&acceptance_families()[(seed % 3) as usize].1, 14);
        let init = random_init(&mut r, k);
        if let Ok((table, qt)) = forward_propagate(&rc, k, &init, 10) {
            let h = solve_h(&rc, &table, &qt, k, &q(1, 1)).unwrap();
            let u = moments_from_recurrence(&rc, 16).unwrap();
            let v = moments_from_recurrence(&qt.rc_q, 16).unwrap();
            // <u, p> = <v, h p> for p of degree <= 10 - k
            let p = Poly::new((0..=10 - k).map(|_| small_rational(&mut r)).collect());
            let hp = &h.poly() * &p;
            prop_assert_eq!(u.apply(&p).unwrap(), v.apply(&hp).unwrap());
        }
    }
}
