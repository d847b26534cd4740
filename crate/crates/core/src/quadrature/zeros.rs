//! Real-zero counting by Sturm sequences and the sign-change bound on the
//! zeros of `Q_n` beyond the largest zero of `P_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::FamilySpec;
use crate::jacobi::QuadratureRule;
use crate::poly::Poly;
use crate::quasi::ConnectionTable;
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::Scalar;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    /// Distinct zeros in the open interval.
    pub distinct: usize,
    /// Set when one of them is a multiple zero.
    pub multiple: bool,
}

/// `p, p', -rem(p, p'), ...` down to the last nonzero remainder.
pub fn sturm_chain<S: Scalar>(p: &Poly<S>) -> Vec<Poly<S>> {
    let mut chain = vec![p.trim()];
    let d = chain[0].derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        let r = r.trim();
        if r.is_zero() {
            return chain;
        }
        chain.push(-&r);
    }
}

/// Sign changes after discarding zero entries.
pub fn sign_changes<S: Scalar>(xs: &[S]) -> usize {
    let signs: Vec<bool> = xs
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `None` stands for `-inf` as a lower end and `+inf` as an upper end.
fn variations<S: Scalar>(chain: &[Poly<S>], at: Option<&S>, upper: bool) -> usize {
    let vals: Vec<S> = chain
        .iter()
        .map(|p| match at {
            Some(x) => p.eval(x),
            None => {
                let lead = p.leading();
                let odd = p.degree().unwrap_or(0) % 2 == 1;
                if !upper && odd {
                    -lead
                } else {
                    lead
                }
            }
        })
        .collect();
    sign_changes(&vals)
}

fn distinct_in<S: Scalar>(p: &Poly<S>, a: Option<&S>, b: Option<&S>) -> usize {
    let chain = sturm_chain(p);
    variations(&chain, a, false).saturating_sub(variations(&chain, b, true))
}

fn check_interval<S: Scalar>(p: &Poly<S>, a: Option<&S>, b: Option<&S>) -> Result<()> {
    if p.is_zero() {
        return Err(Error::InvalidParameter(
            "zero polynomial has no finite zero count".into(),
        ));
    }
    if let (Some(a), Some(b)) = (a, b) {
        if a >= b {
            return Err(Error::InvalidParameter(format!(
                "empty interval ({a}, {b})"
            )));
        }
    }
    for e in [a, b].into_iter().flatten() {
        if p.eval(e).is_zero() {
            return Err(Error::EndpointIsZero);
        }
    }
    Ok(())
}

/// Distinct real zeros in `(a, b)`; `None` endpoints are infinite.
pub fn count_zeros_in_interval<S: Scalar>(
    p: &Poly<S>,
    a: Option<&S>,
    b: Option<&S>,
) -> Result<ZeroCount> {
    check_interval(p, a, b)?;
    let distinct = distinct_in(p, a, b);
    let g = p.gcd(&p.derivative());
    let multiple = g.degree().unwrap_or(0) > 0 && distinct_in(&g, a, b) > 0;
    Ok(ZeroCount { distinct, multiple })
}

/// Zeros in `(a, b)` counted with multiplicity: a zero of order `r`
/// survives in the first `r` iterated gcds with the derivative.
pub fn count_with_multiplicity<S: Scalar>(
    p: &Poly<S>,
    a: Option<&S>,
    b: Option<&S>,
) -> Result<usize> {
    check_interval(p, a, b)?;
    let mut total = 0;
    let mut g = p.trim();
    while g.degree().unwrap_or(0) > 0 {
        total += distinct_in(&g, a, b);
        g = g.gcd(&g.derivative());
    }
    Ok(total)
}

/// `1 + max |c_i / c_lead|`, beyond which no zero lies.
fn cauchy_radius<S: Scalar>(p: &Poly<S>) -> S {
    let lead = p.leading().abs();
    p.coeffs()
        .iter()
        .map(|c| c.abs() / lead.clone())
        .fold(S::zero(), |a, b| if b > a { b } else { a })
        + S::one()
}

/// Removes from `q` every zero it shares with `p`.
fn strip_common<S: Scalar>(q: &Poly<S>, p: &Poly<S>) -> Poly<S> {
    let mut q = q.trim();
    loop {
        let g = q.gcd(p);
        if g.degree().unwrap_or(0) == 0 {
            return q;
        }
        q = q.div_rem(&g).0.trim();
    }
}

/// Sign-change bound `S(1, b_{1,n}, ..., b_{k-1,n})` against the actual
/// number of zeros of `Q_n` (with multiplicity) above the largest zero of `P_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescartesReport {
    pub n: usize,
    pub bound: usize,
    pub actual: usize,
    /// Midpoint of the isolating interval of the largest zero of `P_n`.
    pub largest_p_zero: f64,
    /// All `b_{i,n} >= 0`, in which case every zero of `Q_n` precedes it.
    pub nonnegative_coefficients: bool,
    pub verdict: bool,
}

pub fn descartes_bound<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    n: usize,
) -> Result<DescartesReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("P_0 has no zeros".into()));
    }
    let k = table.k();
    let row: Vec<S> = (0..k).map(|i| table.b(i, n)).collect();
    let bound = sign_changes(&row);
    let p = rc_p.polys(n)?.pop().unwrap();
    let q = table.q_polys(rc_p, n)?.pop().unwrap();
    let q_free = strip_common(&q, &p);
    let chain_p = sturm_chain(&p);
    let chain_q = (q_free.degree().unwrap_or(0) > 0).then(|| sturm_chain(&q_free));
    let between = |chain: &[Poly<S>], lo: &S, hi: &S| {
        variations(chain, Some(lo), false).saturating_sub(variations(chain, Some(hi), true))
    };
    let r = larger(cauchy_radius(&p), cauchy_radius(&q));
    let two = S::from_int(2);
    let (mut lo, mut hi) = (-r.clone(), r);
    let mut isolated = false;
    for _ in 0..MAX_BISECTIONS {
        if between(&chain_p, &lo, &hi) == 1
            && chain_q.as_ref().is_none_or(|c| between(c, &lo, &hi) == 0)
        {
            isolated = true;
            break;
        }
        let mid = split_point(&lo, &hi, &two, &[&p, &q_free]);
        if between(&chain_p, &mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !isolated {
        return Err(Error::NoConvergence);
    }
    let actual = if q_free.degree().unwrap_or(0) == 0 {
        0
    } else {
        count_with_multiplicity(&q_free, Some(&hi), None)?
    };
    Ok(DescartesReport {
        n,
        bound,
        actual,
        largest_p_zero: ((lo + hi) / two).as_f64(),
        nonnegative_coefficients: row.iter().all(|b| !b.is_negative()),
        verdict: actual <= bound,
    })
}

/// A point inside `(lo, hi)` where none of `polys` vanishes.
fn split_point<S: Scalar>(lo: &S, hi: &S, two: &S, polys: &[&Poly<S>]) -> S {
    let mut den = two.clone();
    let mut num = S::one();
    loop {
        let t = lo.clone() + (hi.clone() - lo.clone()) * num.clone() / den.clone();
        if polys.iter().all(|p| !p.eval(&t).is_zero()) {
            return t;
        }
        num = num + S::one();
        den = den + S::one();
    }
}

fn larger<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// Nodes strictly outside the closed interval `support`. More than `k-1`
/// of them is impossible for a genuine family, so it is an error.
pub fn zeros_outside_support(
    rule: &QuadratureRule,
    support: (f64, f64),
    k: usize,
) -> Result<Vec<f64>> {
    let outside: Vec<f64> = rule
        .nodes
        .iter()
        .copied()
        .filter(|x| *x < support.0 || *x > support.1)
        .collect();
    let allowed = k.saturating_sub(1);
    if outside.len() > allowed {
        return Err(Error::BoundViolated {
            count: outside.len(),
            allowed,
        });
    }
    Ok(outside)
}

/// Convex hull of the orthogonality measure for the built-in families.
pub fn default_support<S: Scalar>(spec: &FamilySpec<S>) -> Option<(f64, f64)> {
    match spec {
        FamilySpec::ChebyshevU | FamilySpec::ChebyshevV | FamilySpec::ChebyshevW => {
            Some((-1.0, 1.0))
        }
        FamilySpec::Laguerre { .. } => Some((0.0, f64::INFINITY)),
        FamilySpec::TwoPeriodic { a, b } => {
            let r = a.as_f64().sqrt() + b.as_f64().sqrt();
            Some((-r, r))
        }
        FamilySpec::Custom { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::forward_propagate;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn counts_simple_cases() {
        let c = count_zeros_in_interval(&p(&[-1, 0, 1]), Some(&q(0, 1)), None).unwrap();
        assert_eq!(
            c,
            ZeroCount {
                distinct: 1,
                multiple: false
            }
        );
        let c = count_zeros_in_interval(&p(&[-1, 0, 1]), None, None).unwrap();
        assert_eq!(c.distinct, 2);
        // 8 U_3 / 8 = x^3 - x/2
        let u3 = Poly::new(vec![q(0, 1), q(-1, 2), q(0, 1), q(1, 1)]);
        let c = count_zeros_in_interval(&u3, Some(&q(-1, 1)), Some(&q(1, 1))).unwrap();
        assert_eq!(c.distinct, 3);
    }

    #[test]
    fn double_root_is_flagged() {
        let sq = p(&[1, -2, 1]);
        let c = count_zeros_in_interval(&sq, Some(&q(0, 1)), Some(&q(2, 1))).unwrap();
        assert_eq!(
            c,
            ZeroCount {
                distinct: 1,
                multiple: true
            }
        );
        assert_eq!(
            count_with_multiplicity(&sq, Some(&q(0, 1)), Some(&q(2, 1))).unwrap(),
            2
        );
    }

    #[test]
    fn endpoint_zero_is_rejected() {
        assert_eq!(
            count_zeros_in_interval(&p(&[-1, 1]), Some(&q(1, 1)), None),
            Err(Error::EndpointIsZero)
        );
    }

    #[test]
    fn sign_change_rule() {
        assert_eq!(sign_changes(&[q(1, 1), q(0, 1), q(-1, 1), q(2, 1)]), 2);
        assert_eq!(sign_changes(&[q(1, 1), q(0, 1), q(3, 1)]), 0);
    }

    #[test]
    fn descartes_on_chebyshev() {
        let rc = RecurrenceCoefficients::new(vec![q(0, 1); 12], vec![q(1, 4); 11]).unwrap();
        let (table, _) = forward_propagate(&rc, 2, &[q(-1, 3), q(-1, 3)], 8).unwrap();
        let rep = descartes_bound(&rc, &table, 6).unwrap();
        assert_eq!(rep.bound, 1);
        assert!(rep.verdict);
        let (table, _) = forward_propagate(&rc, 2, &[q(1, 3), q(1, 3)], 8).unwrap();
        let rep = descartes_bound(&rc, &table, 6).unwrap();
        assert_eq!((rep.bound, rep.actual), (0, 0));
        assert!(rep.nonnegative_coefficients);
    }
}
