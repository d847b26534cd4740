//! Oracles shared by the integration tests. Nothing here calls the forward
//! recurrences; quasi-orthogonal families are grown directly from moments.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use quasiquad::functionals::{family_recurrence, moments_from_recurrence, FamilySpec};
use quasiquad::{Poly, Rational, RecurrenceCoefficients, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-6..=6);
        let d: i64 = rng.gen_range(1..=5);
        if n != 0 {
            return q(n, d);
        }
    }
}

pub fn random_init(rng: &mut impl Rng, k: usize) -> Vec<Rational> {
    (0..2 * (k - 1)).map(|_| small_rational(rng)).collect()
}

pub fn acceptance_families() -> Vec<(&'static str, FamilySpec<Rational>)> {
    vec![
        ("chebyshev-u", FamilySpec::ChebyshevU),
        ("laguerre(0)", FamilySpec::Laguerre { alpha: q(0, 1) }),
        (
            "two-periodic(1,2)",
            FamilySpec::TwoPeriodic {
                a: q(1, 1),
                b: q(2, 1),
            },
        ),
    ]
}

pub fn family(spec: &FamilySpec<Rational>, n: usize) -> RecurrenceCoefficients<Rational> {
    family_recurrence(spec, n).unwrap()
}

/// `<u, p>` from a moment slice.
pub fn apply(moments: &[Rational], p: &Poly<Rational>) -> Rational {
    p.coeffs()
        .iter()
        .zip(moments)
        .fold(Rational::zero(), |acc, (c, m)| acc + c * m)
}

/// Monic `P_0..P_n` by Gram-Schmidt on monomials against `moments`.
pub fn gram_schmidt(moments: &[Rational], n: usize) -> Vec<Poly<Rational>> {
    let mut out: Vec<Poly<Rational>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut p = Poly::monomial(m, Rational::one());
        for prev in &out {
            let c = apply(moments, &(&p * prev)) / apply(moments, &(prev * prev));
            p = &p - &prev.scale(&c);
        }
        out.push(p);
    }
    out
}

/// Oracle connection rows for `n = k-1..=n_last`: each `Q_{n+1}` is the
/// unique `(x - c) Q_n - d Q_{n-1}` annihilated by `x^{n-k}` and
/// `x^{n-k+1}` under `u`, and `b_{i,n}` is the projection
/// `<u, Q_n P_{n-i}> / <u, P_{n-i}^2>`.
pub fn oracle_rows(
    rc_p: &RecurrenceCoefficients<Rational>,
    k: usize,
    init: &[Rational],
    n_last: usize,
) -> Option<Vec<Vec<Rational>>> {
    let moments = moments_from_recurrence(rc_p, 2 * n_last + 2).unwrap();
    let u = moments.moments().to_vec();
    let p = gram_schmidt(&u, n_last);
    let from_row = |n: usize, b: &[Rational]| {
        (0..k).fold(Poly::zero(), |acc, i| {
            let c = if i == 0 {
                Rational::one()
            } else {
                b[i - 1].clone()
            };
            &acc + &p[n - i].scale(&c)
        })
    };
    let mut qs = vec![Poly::zero(); n_last + 1];
    qs[k - 1] = from_row(k - 1, &init[..k - 1]);
    qs[k] = from_row(k, &init[k - 1..]);
    let xj = |j: usize| Poly::monomial(j, Rational::one());
    for n in k..n_last {
        let (j0, j1) = (n - k, n - k + 1);
        let a11 = apply(&u, &(&qs[n] * &xj(j0)));
        let a12 = apply(&u, &(&qs[n - 1] * &xj(j0)));
        let a21 = apply(&u, &(&qs[n] * &xj(j1)));
        let a22 = apply(&u, &(&qs[n - 1] * &xj(j1)));
        let r1 = apply(&u, &(&qs[n] * &xj(j0 + 1)));
        let r2 = apply(&u, &(&qs[n] * &xj(j1 + 1)));
        let det = a11.clone() * a22.clone() - a12.clone() * a21.clone();
        if det.is_zero() {
            return None;
        }
        let c = (r1.clone() * a22 - a12 * r2.clone()) / det.clone();
        let d = (a11 * r2 - a21 * r1) / det;
        let next = &(&Poly::linear_root(c) * &qs[n]) - &qs[n - 1].scale(&d);
        qs[n + 1] = next;
    }
    let mut rows = Vec::new();
    for n in k - 1..=n_last {
        let row: Vec<Rational> = (0..k)
            .map(|i| apply(&u, &(&qs[n] * &p[n - i])) / apply(&u, &(&p[n - i] * &p[n - i])))
            .collect();
        // components beyond P_{n-k+1} must vanish for a quasi-orthogonal Q_n
        for i in k..=n {
            assert!(apply(&u, &(&qs[n] * &p[n - i])).is_zero());
        }
        rows.push(row);
    }
    Some(rows)
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

/// `a = (t + 1/t) / 2`, a point outside `[-1, 1]` where `sqrt(a^2 - 1)`
/// is rational.
pub fn joukowski(t: &Rational) -> (Rational, Rational) {
    let inv = t.recip();
    let a = (t.clone() + inv.clone()) / q(2, 1);
    let root = ((t.clone() - inv) / q(2, 1)).abs();
    (a, root)
}

/// `int dmu(x) / (x - a)` for the semicircle law of the monic Chebyshev-U
/// recurrence (`gamma_n = 1/4`, unit mass), `a` outside `[-1, 1]`.
pub fn semicircle_cauchy(t: &Rational) -> Rational {
    let (a, root) = joukowski(t);
    let g = if a.is_positive() { a - root } else { a + root };
    -(g * q(2, 1))
}

/// A positive-definite Geronimus pair over Chebyshev U:
/// `v = mu / h + sum_i c_i delta_{a_i}`, `h = s prod (x - a_i)` with the sign
/// `s` making `h > 0` on `[-1, 1]`. Every moment of `v` is rational.
/// Returns `h` and `v_0..v_{count-1}` computed directly from the measure.
pub fn semicircle_geronimus(
    ts: &[Rational],
    masses: &[Rational],
    count: usize,
) -> (quasiquad::geronimus::GeronimusPoly<Rational>, Vec<Rational>) {
    let roots: Vec<Rational> = ts.iter().map(|t| joukowski(t).0).collect();
    let sign = roots
        .iter()
        .fold(Rational::one(), |acc, a| acc * (-a.clone()))
        .signum();
    let h = roots.iter().fold(Poly::constant(sign.clone()), |acc, a| {
        &acc * &Poly::linear_root(a.clone())
    });
    let mu = moments_from_recurrence(&family(&FamilySpec::ChebyshevU, count + 2), count).unwrap();
    let mu = mu.moments();
    let prefix = (0..count)
        .map(|j| {
            let mut total = Rational::zero();
            for (i, a) in roots.iter().enumerate() {
                let others = roots
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| *l != i)
                    .fold(Rational::one(), |acc, (_, b)| acc * (a.clone() - b.clone()));
                // int x^j / (x - a) dmu
                let mut part = a.pow(j as i32) * semicircle_cauchy(&ts[i]);
                for l in 0..j {
                    part += a.pow((j - 1 - l) as i32) * mu[l].clone();
                }
                total += part / (others * sign.clone());
                total += masses[i].clone() * a.pow(j as i32);
            }
            total
        })
        .collect();
    (
        quasiquad::geronimus::GeronimusPoly::new(h.into_coeffs()).unwrap(),
        prefix,
    )
}

/// Positive-definite Geronimus pairs over Chebyshev U as `(t_i, c_i)`,
/// one entry per zero of `h`.
pub fn pd_cases() -> Vec<(Vec<Rational>, Vec<Rational>)> {
    vec![
        (vec![q(2, 1)], vec![q(1, 10)]),
        (vec![q(-5, 2)], vec![q(1, 2)]),
        (vec![q(3, 1)], vec![q(0, 1)]),
        (vec![q(2, 1), q(-3, 1)], vec![q(1, 5), q(1, 7)]),
        (
            vec![q(3, 2), q(-4, 1), q(5, 1)],
            vec![q(1, 3), q(0, 1), q(1, 9)],
        ),
    ]
}

/// `h`, the oracle moments of `v` and the family they generate.
pub fn pd_family(
    ts: &[Rational],
    masses: &[Rational],
    n_max: usize,
) -> (
    quasiquad::geronimus::GeronimusPoly<Rational>,
    Vec<Rational>,
    quasiquad::geronimus::GeronimusFamily<Rational>,
) {
    let k = ts.len() + 1;
    let (h, v) = semicircle_geronimus(ts, masses, 2 * n_max + 4);
    let rc = family(&FamilySpec::ChebyshevU, n_max + 2 * k + 4);
    let fam = quasiquad::geronimus::connection_from_geronimus(&rc, &h, &v[..k - 1], n_max).unwrap();
    (h, v, fam)
}

/// Newton steps on the exact polynomial from a float start, with the iterate
/// rounded to a 2^-160 grid so the rationals stay small.
pub fn refine(p: &Poly<Rational>, y: f64) -> Rational {
    let grid = Rational::from_integer(num_bigint::BigInt::from(1) << 160);
    let dp = p.derivative();
    let mut x = Rational::from_float(y).unwrap();
    for _ in 0..4 {
        x = x.clone() - p.eval(&x) / dp.eval(&x);
        x = (x * grid.clone()).round() / grid.clone();
    }
    x
}
