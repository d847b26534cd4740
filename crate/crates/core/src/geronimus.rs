//! The polynomial `h` of degree `k-1` with `u = h(x) v`, moments passed
//! between the two functionals, and the Stieltjes-function relation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{moments_from_recurrence, orthogonalize, MomentFunctional};
use crate::poly::Poly;
use crate::quasi::{forward_propagate, ConnectionTable, QTilde};
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::{serde_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GeronimusPoly<S: Scalar> {
    pub k: usize,
    /// `h_0..h_{k-1}`.
    #[serde(rename = "coeffs", with = "serde_scalar::vec")]
    pub h: Vec<S>,
}

impl<S: Scalar> GeronimusPoly<S> {
    pub fn new(h: Vec<S>) -> Result<Self> {
        match h.last() {
            Some(lead) if !lead.is_zeroish() => Ok(GeronimusPoly { k: h.len(), h }),
            _ => Err(Error::InvalidParameter(
                "h must have a nonzero leading coefficient".into(),
            )),
        }
    }

    pub fn poly(&self) -> Poly<S> {
        Poly::new(self.h.clone())
    }

    pub fn eval(&self, x: &S) -> S {
        self.poly().eval(x)
    }

    pub fn leading(&self) -> &S {
        &self.h[self.k - 1]
    }

    pub fn to_f64(&self) -> Result<GeronimusPoly<f64>> {
        GeronimusPoly::new(self.h.iter().map(Scalar::as_f64).collect())
    }

    /// `h / h_{k-1}`.
    pub fn monic(&self) -> Poly<S> {
        self.poly().monic()
    }
}

/// `<u, P_m^2> = u_0 gamma_1 ... gamma_m`.
fn norm_p<S: Scalar>(rc: &RecurrenceCoefficients<S>, m: usize, u0: &S) -> S {
    (1..=m).fold(u0.clone(), |acc, i| acc * rc.gamma(i).clone())
}

/// `<v, Q_n^2> = v_0 gamma~_1 ... gamma~_n`.
pub fn norm_q<S: Scalar>(qt: &QTilde<S>, n: usize, v0: &S) -> S {
    norm_p(&qt.rc_q, n, v0)
}

/// Row `row` of `J^l`, restricted to columns `0..size`.
fn jacobi_power_row<S: Scalar>(
    rc: &RecurrenceCoefficients<S>,
    row: usize,
    l: usize,
    size: usize,
) -> Vec<S> {
    let mut w = vec![S::zero(); size];
    w[row] = S::one();
    for _ in 0..l {
        w = crate::functionals::row_times_jacobi(rc, &w);
    }
    w
}

/// Back-substitution for `h_{k-1}, ..., h_0` at level `n >= k`, with
/// `<u, 1> = 1` and `<v, 1> = v0`. Uses rows `n..=n+k-1` of the table.
pub fn solve_h<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    n: usize,
    v0: &S,
) -> Result<GeronimusPoly<S>> {
    let k = table.k();
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must be at least k = {k}"
        )));
    }
    let top = n + k - 1;
    if table.max_n() < top || rc_p.len() < top || qt.rc_q.len() < n {
        return Err(Error::IndexOutOfRange {
            index: top,
            available: table.max_n().min(rc_p.len()),
        });
    }
    let u0 = S::one();
    let nv = norm_q(qt, n, v0);
    if nv.is_zeroish() {
        return Err(Error::SingularSystem);
    }
    // <v, P_{n+r} Q_n> = s_r <v, Q_n^2>, from the unit lower-triangular system
    let mut s: Vec<S> = Vec::with_capacity(k);
    s.push(S::one());
    for r in 1..k {
        let mut acc = -table.b(r, n + r);
        for i in 1..r {
            acc = acc - table.b(i, n + r) * s[r - i].clone();
        }
        s.push(acc);
    }
    let size = n + k;
    let mut h = vec![S::zero(); k];
    for j in (0..k).rev() {
        let mut rhs = table.b(j, n) * norm_p(rc_p, n - j, &u0);
        for l in j + 1..k {
            let row = jacobi_power_row(rc_p, n - j, l, size);
            let mut ip = S::zero();
            for r in 0..=l - j {
                ip = ip + row[n + r].clone() * s[r].clone();
            }
            rhs = rhs - h[l].clone() * ip * nv.clone();
        }
        h[j] = rhs / nv.clone();
    }
    GeronimusPoly::new(h)
}

/// `h_{k-1} = b_{k-1,k-1} / (gamma~_1 ... gamma~_{k-1} <v, 1>)`, valid
/// only under `<u, 1> = 1`.
pub fn explicit_leading_coefficient<S: Scalar>(
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    u0: &S,
    v0: &S,
) -> Result<S> {
    if *u0 != S::one() {
        return Err(Error::NormalizationMissing);
    }
    let k = table.k();
    let nv = norm_q(qt, k - 1, v0);
    if nv.is_zeroish() {
        return Err(Error::SingularSystem);
    }
    Ok(table.b(k - 1, k - 1) / nv)
}

/// `h_{k-1} = b_{k-1,n} <u, P_{n-k+1}^2> / <v, Q_n^2>` at level `n`.
pub fn leading_coefficient_at<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    n: usize,
    v0: &S,
) -> S {
    let k = table.k();
    table.b(k - 1, n) * norm_p(rc_p, n + 1 - k, &S::one()) / norm_q(qt, n, v0)
}

/// Verdict of [`h_ratio_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub checked: usize,
    pub max_residual: f64,
    pub first_violation: Option<usize>,
    pub holds: bool,
}

/// `h_{k-2}/h_{k-1} = b_{1,n+1} - sum_{i=1}^{k-1} beta_{n+1-i}
/// + (b_{k-2,n}/b_{k-1,n}) gamma_{n-k+2}` for `k <= n <= n_last`.
pub fn h_ratio_check<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    h: &GeronimusPoly<S>,
    n_last: usize,
) -> Result<RatioReport> {
    let k = table.k();
    if k < 2 || h.k != k {
        return Err(Error::InvalidParameter("ratio check needs k >= 2".into()));
    }
    let ratio = h.h[k - 2].clone() / h.h[k - 1].clone();
    let mut max_residual = 0f64;
    let mut first_violation = None;
    let mut checked = 0;
    for n in k..=n_last.min(table.max_n().saturating_sub(1)).min(rc_p.len()) {
        let mut expected = table.b(1, n + 1);
        for i in 1..k {
            expected = expected - rc_p.beta(n + 1 - i).clone();
        }
        expected = expected + table.b(k - 2, n) / table.b(k - 1, n) * rc_p.gamma(n + 2 - k).clone();
        let diff = expected.clone() - ratio.clone();
        max_residual = max_residual.max(diff.as_f64().abs());
        let scale = if expected.abs() > S::one() {
            expected.abs()
        } else {
            S::one()
        };
        if !diff.is_negligible(&scale) && first_violation.is_none() {
            first_violation = Some(n);
        }
        checked += 1;
    }
    Ok(RatioReport {
        checked,
        max_residual,
        first_violation,
        holds: first_violation.is_none(),
    })
}

/// `v_{n+k-1} = (u_n - sum_{j<k-1} h_j v_{j+n}) / h_{k-1}` for every stored
/// `u_n`, seeded with `v_0..v_{k-2}`.
pub fn v_moments_from_u<S: Scalar>(
    mf_u: &MomentFunctional<S>,
    h: &GeronimusPoly<S>,
    v_prefix: &[S],
) -> Result<MomentFunctional<S>> {
    let k = h.k;
    if v_prefix.len() != k - 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} prefix moments of v, got {}",
            k - 1,
            v_prefix.len()
        )));
    }
    if k == 1 {
        let u = mf_u.moments();
        let h0 = h.h[0].clone();
        return MomentFunctional::new(u.iter().map(|m| m.clone() / h0.clone()).collect());
    }
    let mut v = v_prefix.to_vec();
    let lead = h.h[k - 1].clone();
    for (n, un) in mf_u.moments().iter().enumerate() {
        let mut acc = un.clone();
        for j in 0..k - 1 {
            acc = acc - h.h[j].clone() * v[j + n].clone();
        }
        v.push(acc / lead.clone());
    }
    MomentFunctional::new(v)
}

/// Moments of `h(x) v`: `sum_j h_j v_{j+n}` for as many `n` as `v` allows.
pub fn u_moments_from_v<S: Scalar>(v: &MomentFunctional<S>, h: &GeronimusPoly<S>) -> Vec<S> {
    let vm = v.moments();
    let count = vm.len().saturating_sub(h.k - 1);
    (0..count)
        .map(|n| {
            h.h.iter().enumerate().fold(S::zero(), |acc, (j, hj)| {
                acc + hj.clone() * vm[j + n].clone()
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StieltjesData<S: Scalar> {
    /// Polynomial part `T(z)` of `h(z) S_v(z)`.
    pub t_poly: Poly<S>,
    #[serde(with = "serde_scalar::vec")]
    pub v_prefix: Vec<S>,
}

/// `T(z) = sum_j h_j z^j sum_{s<j} v_s z^{-s-1}`, keeping nonnegative powers.
pub fn stieltjes_t<S: Scalar>(h: &GeronimusPoly<S>, v_prefix: &[S]) -> Result<StieltjesData<S>> {
    let k = h.k;
    if v_prefix.len() + 1 < k {
        return Err(Error::InvalidParameter(format!(
            "need at least {} prefix moments of v, got {}",
            k - 1,
            v_prefix.len()
        )));
    }
    let mut coeffs = vec![S::zero(); k.saturating_sub(1)];
    for (m, c) in coeffs.iter_mut().enumerate() {
        for j in m + 1..k {
            *c = c.clone() + h.h[j].clone() * v_prefix[j - 1 - m].clone();
        }
    }
    Ok(StieltjesData {
        t_poly: Poly::new(coeffs),
        v_prefix: v_prefix[..k.saturating_sub(1)].to_vec(),
    })
}

/// Coefficients of `z^{-1}..z^{-count}` in `h(z) S_v(z) - T(z)` minus
/// `u_0..u_{count-1}`.
pub fn stieltjes_residuals<S: Scalar>(
    h: &GeronimusPoly<S>,
    v: &MomentFunctional<S>,
    u: &MomentFunctional<S>,
    count: usize,
) -> Result<Vec<S>> {
    let vm = v.moments();
    if vm.len() < count + h.k - 1 || u.len() < count {
        return Err(Error::IndexOutOfRange {
            index: count,
            available: u.len().min(vm.len() + 1 - h.k),
        });
    }
    Ok((0..count)
        .map(|m| {
            let series = h.h.iter().enumerate().fold(S::zero(), |acc, (j, hj)| {
                acc + hj.clone() * vm[j + m].clone()
            });
            series - u.moments()[m].clone()
        })
        .collect())
}

/// Quasi-orthogonal family produced by a prescribed Geronimus pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GeronimusFamily<S: Scalar> {
    pub table: ConnectionTable<S>,
    pub qt: QTilde<S>,
    pub v: MomentFunctional<S>,
    /// `b_{1..k-1,k-1}` followed by `b_{1..k-1,k}`.
    pub init: Vec<S>,
}

/// Goes from `(h, v_0..v_{k-2})` to the connection table: builds the
/// moments of `v` from `u = h v`, orthogonalizes them, reads off the initial
/// rows and propagates. `u` is the normalized functional of `rc_p`.
pub fn connection_from_geronimus<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    h: &GeronimusPoly<S>,
    v_prefix: &[S],
    n_max: usize,
) -> Result<GeronimusFamily<S>> {
    let k = h.k;
    let u = moments_from_recurrence(rc_p, 2 * n_max + 2)?;
    let v = v_moments_from_u(&u, h, v_prefix)?;
    let orth = orthogonalize(&v, k.max(1))?;
    let mut init = Vec::with_capacity(2 * (k - 1));
    for deg in [k - 1, k] {
        if k == 1 {
            break;
        }
        let e = rc_p.expand_in_p(&orth.polys[deg])?;
        init.extend((1..k).map(|i| e.coeff(deg - i)));
    }
    let (table, qt) = forward_propagate(rc_p, k, &init, n_max)?;
    Ok(GeronimusFamily { table, qt, v, init })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{family_recurrence, FamilySpec};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn k1_gives_constant_one() {
        let rc = family_recurrence::<Rational>(&FamilySpec::ChebyshevU, 8).unwrap();
        let (t, qt) = forward_propagate(&rc, 1, &[], 6).unwrap();
        let h = solve_h(&rc, &t, &qt, 2, &q(1, 1)).unwrap();
        assert_eq!(h.h, vec![q(1, 1)]);
    }

    #[test]
    fn k2_linear_factor() {
        let rc = family_recurrence::<Rational>(&FamilySpec::ChebyshevU, 14).unwrap();
        let h = GeronimusPoly::new(vec![q(2, 1), q(1, 1)]).unwrap();
        let fam = connection_from_geronimus(&rc, &h, &[q(1, 1)], 10).unwrap();
        let solved = solve_h(&rc, &fam.table, &fam.qt, 3, &q(1, 1)).unwrap();
        assert_eq!(solved, h);
        // moment identity u_n = h_0 v_n + h_1 v_{n+1}, n = 0, 1
        let u = moments_from_recurrence(&rc, 4).unwrap();
        for n in 0..2 {
            let vm = fam.v.moments();
            assert_eq!(q(2, 1) * vm[n].clone() + vm[n + 1].clone(), u.moments()[n]);
        }
    }

    #[test]
    fn stieltjes_polynomial_part() {
        let h = GeronimusPoly::new(vec![q(3, 1), q(5, 1)]).unwrap();
        let t = stieltjes_t(&h, &[q(7, 1)]).unwrap();
        assert_eq!(t.t_poly, Poly::constant(q(35, 1)));
        let h1 = GeronimusPoly::new(vec![q(3, 1)]).unwrap();
        assert!(stieltjes_t(&h1, &[]).unwrap().t_poly.is_zero());
    }

    #[test]
    fn normalization_is_enforced() {
        let rc = family_recurrence::<Rational>(&FamilySpec::ChebyshevU, 8).unwrap();
        let (t, qt) = forward_propagate(&rc, 2, &[q(1, 2), q(1, 3)], 6).unwrap();
        assert_eq!(
            explicit_leading_coefficient(&t, &qt, &q(2, 1), &q(1, 1)),
            Err(Error::NormalizationMissing)
        );
    }
}
