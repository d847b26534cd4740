mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use quasiquad::functionals::FamilySpec;
use quasiquad::geronimus::{solve_h, GeronimusPoly};
use quasiquad::quadrature::{
    build_rule, christoffel_numbers_k2, confluent_kernel_v, confluent_kernel_v_derivative_form,
    count_with_multiplicity, default_support, descartes_bound, exactness_report,
    kernel_identity_check, kernel_v, zeros_outside_support,
};
use quasiquad::quasi::{forward_propagate, ConnectionTable, QTilde};
use quasiquad::{Error, Poly, Rational, RecurrenceCoefficients, Scalar};

struct Random {
    rc: RecurrenceCoefficients<Rational>,
    table: ConnectionTable<Rational>,
    qt: QTilde<Rational>,
    h: GeronimusPoly<Rational>,
}

fn random_family(
    spec: &FamilySpec<Rational>,
    k: usize,
    init: &[Rational],
    n_max: usize,
) -> Option<Random> {
    let rc = family(spec, n_max + 2 * k + 4);
    let (table, qt) = forward_propagate(&rc, k, init, n_max).ok()?;
    let h = solve_h(&rc, &table, &qt, k, &Rational::one()).ok()?;
    Some(Random { rc, table, qt, h })
}

fn kernel_poly(
    qt: &QTilde<Rational>,
    table: &ConnectionTable<Rational>,
    rc: &RecurrenceCoefficients<Rational>,
    n: usize,
    x: &Rational,
) -> Poly<Rational> {
    let polys = table.q_polys(rc, n).unwrap();
    let norms = qt.rc_q.norms(n, &Rational::one()).unwrap();
    polys.iter().zip(&norms).fold(Poly::zero(), |acc, (p, nm)| {
        &acc + &p.scale(&(p.eval(x) / nm.clone()))
    })
}

#[test]
fn kernel_of_v_reproduces() {
    for (ts, masses) in pd_cases() {
        let k = ts.len() + 1;
        let (_, v, fam) = pd_family(&ts, &masses, 10);
        let rc = family(&FamilySpec::ChebyshevU, 20);
        let v: Vec<Rational> = v.iter().map(|m| m.clone() / v[0].clone()).collect();
        for n in 0..=6 {
            let x = q(2, 7);
            let kp = kernel_poly(&fam.qt, &fam.table, &rc, n, &x);
            for deg in 0..=n {
                let p = Poly::monomial(deg, Rational::one()) + Poly::constant(q(-1, 3));
                assert_eq!(apply(&v, &(&kp * &p)), p.eval(&x), "k={k} n={n} deg={deg}");
            }
            // one degree too many
            let p = Poly::monomial(n + 1, Rational::one());
            assert_ne!(apply(&v, &(&kp * &p)), p.eval(&x), "k={k} n={n}");
        }
    }
}

fn sample_points(r: &mut impl rand::Rng, count: usize) -> Vec<(Rational, Rational)> {
    (0..count)
        .map(|_| (small_rational(r), small_rational(r)))
        .collect()
}

#[test]
fn kernel_identities_are_exact() {
    let mut r = rng(5);
    for (name, spec) in acceptance_families() {
        for k in 1..=4 {
            let mut done = 0;
            while done < 2 {
                let init = random_init(&mut r, k);
                let Some(f) = random_family(&spec, k, &init, 16) else {
                    continue;
                };
                for n in k - 1..=10 {
                    let pts = sample_points(&mut r, 20);
                    let rep =
                        kernel_identity_check(&f.rc, &f.table, &f.qt, &f.h, &q(1, 1), n, &pts)
                            .unwrap();
                    assert!(rep.holds, "{name} k={k} n={n}: {rep:?}");
                    assert_eq!(
                        (
                            rep.kernel_v,
                            rep.kernel_u_quotient,
                            rep.kernel_v_quotient,
                            rep.extended
                        ),
                        (0.0, 0.0, 0.0, 0.0)
                    );
                }
                done += 1;
            }
        }
    }
}

#[test]
fn perturbed_table_breaks_kernel_identity() {
    let spec = FamilySpec::ChebyshevU;
    let f = random_family(&spec, 3, &[q(1, 2), q(-1, 3), q(2, 1), q(1, 5)], 12).unwrap();
    let bad = f.table.with_entry(1, 6, f.table.b(1, 6) + q(1, 9)).unwrap();
    let pts = [(q(1, 3), q(-2, 1)), (q(3, 2), q(1, 4))];
    let rep = kernel_identity_check(&f.rc, &bad, &f.qt, &f.h, &q(1, 1), 5, &pts).unwrap();
    assert!(!rep.holds);
}

#[test]
fn confluent_forms_agree() {
    let mut r = rng(12);
    for (_, spec) in acceptance_families() {
        for k in 2..=4 {
            let Some(f) = random_family(&spec, k, &random_init(&mut r, k), 14) else {
                continue;
            };
            for n in k - 1..=8 {
                for x in [q(1, 3), q(-7, 5), q(9, 2)] {
                    let direct = kernel_v(&f.qt, &q(1, 1), n, &x, &x).unwrap();
                    let conf =
                        confluent_kernel_v(&f.rc, &f.table, &f.qt, &f.h, &q(1, 1), n, &x).unwrap();
                    assert_eq!(direct, conf);
                    match confluent_kernel_v_derivative_form(
                        &f.rc,
                        &f.table,
                        &f.qt,
                        &f.h,
                        &q(1, 1),
                        n,
                        &x,
                    ) {
                        Ok(d) => assert_eq!(direct, d),
                        Err(e) => assert_eq!(e, Error::DerivativeFormSingular),
                    }
                }
            }
        }
    }
}

#[test]
fn derivative_form_is_singular_at_critical_points_of_h() {
    let f = random_family(
        &FamilySpec::ChebyshevU,
        3,
        &[q(1, 2), q(-1, 3), q(2, 1), q(1, 5)],
        12,
    )
    .unwrap();
    let hp = f.h.poly();
    // h quadratic: h' vanishes at -h_1 / (2 h_2)
    let crit = -hp.coeffs()[1].clone() / (q(2, 1) * hp.coeffs()[2].clone());
    assert_eq!(
        confluent_kernel_v_derivative_form(&f.rc, &f.table, &f.qt, &f.h, &q(1, 1), 4, &crit),
        Err(Error::DerivativeFormSingular)
    );
}

#[test]
fn k2_closed_form_matches_eigen_weights() {
    for (ts, masses) in pd_cases().into_iter().filter(|c| c.0.len() == 1) {
        let (h, v, fam) = pd_family(&ts, &masses, 24);
        let rc = family(&FamilySpec::ChebyshevU, 30);
        let (rcf, tf, qf, hf) = (
            rc.to_f64().unwrap(),
            fam.table.to_f64().unwrap(),
            fam.qt.to_f64().unwrap(),
            h.to_f64().unwrap(),
        );
        let atom = !masses[0].is_zero();
        for m in 1..=20 {
            let rule = build_rule(&fam.qt, &v[0], m).unwrap();
            let w: Vec<f64> = if atom {
                // a node converges to the zero of h, where (y - a) cancels
                let qm = fam.table.q_polys(&rc, m).unwrap().pop().unwrap();
                let ys: Vec<Rational> = rule.nodes.iter().map(|y| refine(&qm, *y)).collect();
                christoffel_numbers_k2(&rc, &fam.table, &fam.qt, &h, &v[0], &ys)
                    .unwrap()
                    .iter()
                    .map(Scalar::as_f64)
                    .collect()
            } else {
                christoffel_numbers_k2(&rcf, &tf, &qf, &hf, &v[0].as_f64(), &rule.nodes).unwrap()
            };
            for (a, b) in w.iter().zip(&rule.weights) {
                assert!((a - b).abs() <= 1e-10 * b.abs(), "m={m}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn rules_are_exact_to_degree_2m_minus_1_only() {
    let rc = family(&FamilySpec::ChebyshevU, 50);
    for (ts, masses) in pd_cases() {
        let k = ts.len() + 1;
        let (_, v, fam) = pd_family(&ts, &masses, 22);
        let vf: Vec<f64> = v.iter().map(Scalar::as_f64).collect();
        let mut visible = 0;
        for m in 1..=20 {
            let rule = build_rule(&fam.qt, &v[0], m).unwrap();
            let rep = exactness_report(&rule, &vf, 1e-10).unwrap();
            assert!(rep.holds, "k={k} m={m}: {}", rep.max_residual);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - vf[0]).abs() <= 1e-12 * vf[0]);
            // the error on x^{2m} is exactly ||Q_m||^2
            let gap = vf[2 * m] - rule.integrate(|x| x.powi(2 * m as i32));
            let size = rule.integrate(|x| x.powi(2 * m as i32));
            let nq = quasiquad::geronimus::norm_q(&fam.qt, m, &v[0]).as_f64();
            assert!(
                (gap - nq).abs() <= 1e-11 * size,
                "k={k} m={m}: {gap} vs {nq}"
            );
            let qm = fam.table.q_polys(&rc, m).unwrap().pop().unwrap();
            assert_eq!(
                apply(&v, &(&qm * &qm)),
                quasiquad::geronimus::norm_q(&fam.qt, m, &v[0])
            );
            if rep.first_inexact.unwrap() > 1e-8 {
                visible += 1;
            }
        }
        assert!(
            visible >= 5,
            "k={k}: strictness visible for {visible} sizes"
        );
    }
}

#[test]
fn nodes_outside_support_stay_within_bound() {
    let support = default_support(&FamilySpec::<Rational>::ChebyshevU).unwrap();
    for (ts, masses) in pd_cases() {
        let k = ts.len() + 1;
        let (_, v, fam) = pd_family(&ts, &masses, 22);
        let mut seen = 0;
        for m in 1..=20 {
            let rule = build_rule(&fam.qt, &v[0], m).unwrap();
            let out = zeros_outside_support(&rule, support, k).unwrap();
            seen = seen.max(out.len());
        }
        // every atom of v outside [-1, 1] eventually attracts a node
        let atoms = masses.iter().filter(|c| !c.is_zero()).count();
        assert!(seen >= atoms && seen <= k - 1, "k={k}: {seen}");
    }
}

#[test]
fn too_many_outside_nodes_is_an_error() {
    let rule = quasiquad::jacobi::QuadratureRule {
        size: 3,
        nodes: vec![-2.0, 0.0, 2.0],
        weights: vec![1.0; 3],
        mass: 3.0,
        exactness_degree: 5,
    };
    assert_eq!(
        zeros_outside_support(&rule, (-1.0, 1.0), 2),
        Err(Error::BoundViolated {
            count: 2,
            allowed: 1
        })
    );
    assert_eq!(
        zeros_outside_support(&rule, (-1.0, 1.0), 3).unwrap().len(),
        2
    );
}

#[test]
fn sign_change_bound_on_a_corpus() {
    let mut r = rng(77);
    let mut tight = 0;
    for (name, spec) in acceptance_families() {
        for k in 2..=4 {
            let mut done = 0;
            while done < 4 {
                let init = random_init(&mut r, k);
                let Ok((table, _)) = forward_propagate(&family(&spec, 16), k, &init, 10) else {
                    continue;
                };
                let rc = family(&spec, 16);
                for n in 1..=10 {
                    let rep = descartes_bound(&rc, &table, n).unwrap();
                    assert!(rep.verdict, "{name} k={k} n={n}: {rep:?}");
                    if rep.nonnegative_coefficients {
                        assert_eq!(rep.actual, 0);
                    }
                    // independent count: zeros of Q_n above every zero of P_n
                    let p = rc.polys(n).unwrap().pop().unwrap();
                    let qn = table.q_polys(&rc, n).unwrap().pop().unwrap();
                    let above =
                        Rational::parse_scalar(&format!("{:.12}", rep.largest_p_zero)).unwrap();
                    let edge = above + q(1, 1_000_000);
                    if count_with_multiplicity(&p, Some(&edge), None).unwrap() == 0
                        && !qn.eval(&edge).is_zero()
                    {
                        assert!(
                            count_with_multiplicity(&qn, Some(&edge), None).unwrap() <= rep.bound
                        );
                    }
                    if rep.actual == rep.bound && rep.bound > 0 {
                        tight += 1;
                    }
                }
                done += 1;
            }
        }
    }
    assert!(tight > 0, "bound never attained");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_identity_for_random_families(
        k in 1usize..=4,
        fam in 0usize..3,
        n in 3usize..=8,
        init in prop::collection::vec((-6i64..=6, 1i64..=5), 6),
        pts in prop::collection::vec(((-9i64..=9, 1i64..=4), (-9i64..=9, 1i64..=4)), 1..6),
    ) {
        let init: Vec<Rational> = init
            .into_iter()
            .take(2 * (k - 1))
            .map(|(a, b)| q(if a == 0 { 1 } else { a }, b))
            .collect();
        let pts: Vec<(Rational, Rational)> =
            pts.into_iter().map(|((a, b), (c, d))| (q(a, b), q(c, d))).collect();
        let spec = acceptance_families()[fam].1.clone();
        if let Some(f) = random_family(&spec, k, &init, 12) {
            let rep = kernel_identity_check(&f.rc, &f.table, &f.qt, &f.h, &q(1, 1), n, &pts).unwrap();
            prop_assert!(rep.holds);
        }
    }
}
