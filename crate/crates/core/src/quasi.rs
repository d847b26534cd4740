//! Quasi-orthogonal families `Q_n = P_n + b_{1,n} P_{n-1} + ... + b_{k-1,n} P_{n-k+1}`
//! that are themselves orthogonal: forward propagation of the connection
//! coefficients, the Euclidean descent that fixes the low-degree rows, and
//! the constant-coefficient special case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrence::{PolyInPBasis, RecurrenceCoefficients};
use crate::scalar::{serde_scalar, Scalar};

/// Connection coefficients `b_{i,n}`, `0 <= i <= k-1`, rows `n = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawTable<S>", into = "RawTable<S>")]
pub struct ConnectionTable<S: Scalar> {
    k: usize,
    rows: Vec<Vec<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawRow<S: Scalar> {
    n: usize,
    #[serde(with = "serde_scalar::vec")]
    b: Vec<S>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawTable<S: Scalar> {
    k: usize,
    rows: Vec<RawRow<S>>,
}

impl<S: Scalar> TryFrom<RawTable<S>> for ConnectionTable<S> {
    type Error = Error;
    fn try_from(raw: RawTable<S>) -> Result<Self> {
        for (pos, row) in raw.rows.iter().enumerate() {
            if row.n != pos {
                return Err(Error::InvalidParameter(format!(
                    "row {pos} is labelled n = {}",
                    row.n
                )));
            }
        }
        ConnectionTable::from_rows(raw.k, raw.rows.into_iter().map(|r| r.b).collect())
    }
}

impl<S: Scalar> From<ConnectionTable<S>> for RawTable<S> {
    fn from(t: ConnectionTable<S>) -> Self {
        RawTable {
            k: t.k,
            rows: t
                .rows
                .into_iter()
                .enumerate()
                .map(|(n, b)| RawRow { n, b })
                .collect(),
        }
    }
}

impl<S: Scalar> ConnectionTable<S> {
    /// Validates the structural conventions: `b_{0,n} = 1` and `b_{i,n} = 0`
    /// for `i > n`. Orthogonality is not checked here.
    pub fn from_rows(k: usize, rows: Vec<Vec<S>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "row {n} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if row[0] != S::one() {
                return Err(Error::InvalidParameter(format!("b[0, {n}] must be 1")));
            }
            if let Some(i) = (n + 1..k).find(|&i| !row[i].is_zero()) {
                return Err(Error::InvalidParameter(format!(
                    "b[{i}, {n}] must vanish because {i} > {n}"
                )));
            }
        }
        Ok(ConnectionTable { k, rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest row index.
    pub fn max_n(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// `b_{i,n}`, zero outside `0 <= i < k`. Panics if row `n` is missing.
    pub fn b(&self, i: usize, n: usize) -> S {
        let row = self
            .rows
            .get(n)
            .unwrap_or_else(|| panic!("row {n} not in table (max {})", self.max_n()));
        row.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Same as [`Self::b`] but with a signed index, so `b_{-1,n} = 0`.
    fn bs(&self, i: isize, n: usize) -> S {
        if i < 0 {
            S::zero()
        } else {
            self.b(i as usize, n)
        }
    }

    /// `Q_n` in the P-basis.
    pub fn q_in_p(&self, n: usize) -> PolyInPBasis<S> {
        let mut coeffs = vec![S::zero(); n + 1];
        for i in 0..self.k.min(n + 1) {
            coeffs[n - i] = self.b(i, n);
        }
        PolyInPBasis::new(coeffs)
    }

    /// Monomial coefficients of `Q_0..Q_n`.
    pub fn q_polys(&self, rc_p: &RecurrenceCoefficients<S>, n: usize) -> Result<Vec<Poly<S>>> {
        let p = rc_p.polys(n)?;
        Ok((0..=n)
            .map(|m| {
                (0..self.k.min(m + 1))
                    .fold(Poly::zero(), |acc, i| &acc + &p[m - i].scale(&self.b(i, m)))
            })
            .collect())
    }

    /// `Q_0(x)..Q_n(x)` from the values `P_0(x)..P_n(x)`.
    pub fn q_values(&self, p_vals: &[S], n: usize) -> Vec<S> {
        (0..=n)
            .map(|m| {
                (0..self.k.min(m + 1)).fold(S::zero(), |acc, i| {
                    acc + self.b(i, m) * p_vals[m - i].clone()
                })
            })
            .collect()
    }

    pub fn to_f64(&self) -> Result<ConnectionTable<f64>> {
        ConnectionTable::from_rows(
            self.k,
            self.rows
                .iter()
                .map(|r| r.iter().map(Scalar::as_f64).collect())
                .collect(),
        )
    }

    /// Copy with one entry replaced; used to probe the checks.
    pub fn with_entry(&self, i: usize, n: usize, value: S) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows[n][i] = value;
        ConnectionTable::from_rows(self.k, rows)
    }
}

/// Recurrence coefficients of the quasi-orthogonal family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", transparent)]
pub struct QTilde<S: Scalar> {
    pub rc_q: RecurrenceCoefficients<S>,
}

impl<S: Scalar> QTilde<S> {
    pub fn to_f64(&self) -> Result<QTilde<f64>> {
        Ok(QTilde {
            rc_q: self.rc_q.to_f64()?,
        })
    }
}

fn max_abs<'a, S: Scalar>(xs: impl IntoIterator<Item = &'a S>) -> S {
    xs.into_iter()
        .map(|x| x.abs())
        .fold(S::one(), |a, b| if b > a { b } else { a })
}

/// Fills the table from the initial data `b_{1..k-1,k-1}` followed by
/// `b_{1..k-1,k}`. Rows `1..=k-2` come from the Euclidean descent, rows
/// `k+1..=n_max+1` from the forward recurrences. The returned recurrence
/// covers `beta~_0..beta~_{n_max}` and `gamma~_1..gamma~_{n_max}`.
pub fn forward_propagate<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    k: usize,
    init: &[S],
    n_max: usize,
) -> Result<(ConnectionTable<S>, QTilde<S>)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if init.len() != 2 * (k - 1) {
        return Err(Error::InvalidInit {
            expected: 2 * (k - 1),
            got: init.len(),
        });
    }
    if n_max < k {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} must be at least k = {k}"
        )));
    }
    if rc_p.len() < n_max {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            available: rc_p.len(),
        });
    }
    let beta = |n: usize| rc_p.beta(n).clone();
    let gamma = |n: usize| rc_p.gamma(n).clone();

    let mut rows: Vec<Vec<S>> = Vec::with_capacity(n_max + 2);
    if k == 1 {
        rows.resize(n_max + 2, vec![S::one()]);
    } else {
        let row = |vals: &[S]| {
            let mut r = vec![S::one()];
            r.extend_from_slice(vals);
            r
        };
        let prev = row(&init[..k - 1]);
        let curr = row(&init[k - 1..]);
        if prev[k - 1].is_zeroish() {
            return Err(Error::QuasiOrthogonalityViolated { n: k - 1 });
        }
        if curr[k - 1].is_zeroish() {
            return Err(Error::QuasiOrthogonalityViolated { n: k });
        }
        let q_prev = PolyInPBasis::new(prev.iter().rev().cloned().collect());
        let q_curr = PolyInPBasis::new({
            let mut c: Vec<S> = curr.iter().rev().cloned().collect();
            c.insert(0, S::zero());
            c
        });
        let low = initial_coefficients(rc_p, &q_curr, &q_prev)?;
        let mut r0 = vec![S::zero(); k];
        r0[0] = S::one();
        rows.push(r0);
        for (n, tail) in low.into_iter().enumerate() {
            let mut r = vec![S::zero(); k];
            r[0] = S::one();
            for (i, v) in tail.into_iter().enumerate() {
                r[i + 1] = v;
            }
            debug_assert_eq!(rows.len(), n + 1);
            rows.push(r);
        }
        rows.push(prev);
        rows.push(curr);

        for n in k..=n_max {
            let next = forward_step(&beta, &gamma, k, &rows[n - 1], &rows[n], n)?;
            if next[k - 1].is_negligible(&max_abs(rows[n].iter().chain(&next))) {
                return Err(Error::QuasiOrthogonalityViolated { n: n + 1 });
            }
            rows.push(next);
        }
    }
    let table = ConnectionTable { k, rows };
    let qt = qtilde_from_table(rc_p, &table, n_max)?;
    Ok((table, qt))
}

/// Row `n+1` from rows `n-1` and `n`, for `n >= k >= 2`.
fn forward_step<S: Scalar>(
    beta: &impl Fn(usize) -> S,
    gamma: &impl Fn(usize) -> S,
    k: usize,
    prev: &[S],
    curr: &[S],
    n: usize,
) -> Result<Vec<S>> {
    let b = |i: usize, row: &[S]| row.get(i).cloned().unwrap_or_else(S::zero);
    let bk1_prev = prev[k - 1].clone();
    let bk1 = curr[k - 1].clone();

    let b1_next = b(1, curr) + beta(n) - beta(n + 1 - k)
        + b(k - 2, prev) / bk1_prev.clone() * gamma(n + 1 - k)
        - b(k - 2, curr) / bk1.clone() * gamma(n + 2 - k);
    let shift = beta(n - 1) - beta(n) - b(1, curr) + b1_next.clone();
    // gamma~_n through the ratio identity
    let g_ratio = bk1.clone() / bk1_prev.clone() * gamma(n + 1 - k);
    let b2_next = b(2, curr) + gamma(n) - g_ratio.clone() + b(1, curr) * shift.clone();

    let mut next = vec![S::zero(); k];
    next[0] = S::one();
    next[1] = b1_next;
    if k == 2 {
        // b_2 is identically zero; the b_2 recurrence must agree
        if !b2_next.is_negligible(&max_abs([&gamma(n), &g_ratio])) {
            return Err(Error::CrossCheck(format!(
                "k = 2 consistency of the second-coefficient recurrence fails at n = {n}: {b2_next}"
            )));
        }
        return Ok(next);
    }
    next[2] = b2_next.clone();
    // gamma~_n through its defining expression
    let g_direct = gamma(n) + b(2, curr) - b2_next + b(1, curr) * shift;
    if cfg!(debug_assertions)
        && !(g_direct.clone() - g_ratio.clone()).is_negligible(&max_abs([&g_direct, &g_ratio]))
    {
        return Err(Error::CrossCheck(format!(
            "two forms of gamma~_{n} disagree: {g_direct} vs {g_ratio}"
        )));
    }
    for i in 1..=k.saturating_sub(3) {
        let common = b(i + 2, curr)
            + b(i + 1, curr) * (beta(n - 1 - i) - beta(n) - b(1, curr) + next[1].clone())
            + b(i, curr) * gamma(n - i);
        let substituted = common.clone() - b(i, prev) * g_ratio.clone();
        if cfg!(debug_assertions) {
            let direct = common - b(i, prev) * g_direct.clone();
            if !(direct.clone() - substituted.clone())
                .is_negligible(&max_abs([&direct, &substituted]))
            {
                return Err(Error::CrossCheck(format!(
                    "two forms of b[{}, {}] disagree",
                    i + 2,
                    n + 1
                )));
            }
        }
        next[i + 2] = substituted;
    }
    Ok(next)
}

/// `beta~_n = beta_n + b_{1,n} - b_{1,n+1}` and the defining expression for
/// `gamma~_n`, for `n <= n_max`.
pub fn qtilde_from_table<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    n_max: usize,
) -> Result<QTilde<S>> {
    if table.max_n() < n_max + 1 {
        return Err(Error::IndexOutOfRange {
            index: n_max + 1,
            available: table.max_n(),
        });
    }
    let beta_t: Vec<S> = (0..=n_max)
        .map(|n| rc_p.beta(n).clone() + table.b(1, n) - table.b(1, n + 1))
        .collect();
    let mut gamma_t = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let g = gamma_tilde_direct(rc_p, table, n);
        let scale = max_abs([rc_p.gamma(n), &table.b(1, n), &table.b(2, n)]);
        if g.is_negligible(&scale) {
            return Err(Error::NotRegular { index: n });
        }
        gamma_t.push(g);
    }
    Ok(QTilde {
        rc_q: RecurrenceCoefficients::new(beta_t, gamma_t)?,
    })
}

fn gamma_tilde_direct<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    t: &ConnectionTable<S>,
    n: usize,
) -> S {
    rc_p.gamma(n).clone() + t.b(2, n) - t.b(2, n + 1)
        + t.b(1, n) * (rc_p.beta(n - 1).clone() - rc_p.beta(n).clone() - t.b(1, n) + t.b(1, n + 1))
}

/// Output of [`backward_embed`].
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<S: Scalar> {
    /// `c_0..c_m` as `beta`, `d_1..d_m` as `gamma`.
    pub rc: RecurrenceCoefficients<S>,
    /// `R_0..R_{m+1}`, monic.
    pub polys: Vec<Poly<S>>,
    /// All `d_j > 0`.
    pub interlacing: bool,
}

/// Euclidean descent `R_{j+1} = (x - c_j) R_j - d_j R_{j-1}` from a monic
/// pair of degrees `m+1` and `m`.
pub fn backward_embed<S: Scalar>(upper: &Poly<S>, lower: &Poly<S>) -> Result<Embedding<S>> {
    let m = lower
        .degree()
        .ok_or_else(|| Error::InvalidParameter("lower polynomial is zero".into()))?;
    if upper.degree() != Some(m + 1) {
        return Err(Error::InvalidParameter(format!(
            "degrees must be m+1 and m, got {:?} and {m}",
            upper.degree()
        )));
    }
    if upper.leading() != S::one() || lower.leading() != S::one() {
        return Err(Error::InvalidParameter(
            "both polynomials must be monic".into(),
        ));
    }
    let mut polys = vec![Poly::zero(); m + 2];
    polys[m + 1] = upper.clone();
    polys[m] = lower.clone();
    let mut c = vec![S::zero(); m + 1];
    let mut d = vec![S::zero(); m];
    for j in (1..=m).rev() {
        let (quot, rem) = polys[j + 1].div_rem(&polys[j]);
        c[j] = -quot.coeff(0);
        let scale = max_abs(polys[j + 1].coeffs());
        let lead = rem.coeff(j - 1);
        if lead.is_negligible(&scale) {
            return Err(Error::DegenerateRemainder { degree: j });
        }
        d[j - 1] = -lead.clone();
        let inv = S::one() / d[j - 1].clone();
        // R_{j-1} is monic of degree exactly j-1
        let mut coeffs: Vec<S> = rem.coeffs()[..j]
            .iter()
            .map(|a| -(a.clone() * inv.clone()))
            .collect();
        coeffs[j - 1] = S::one();
        polys[j - 1] = Poly::new(coeffs);
    }
    c[0] = -polys[1].coeff(0);
    let interlacing = d.iter().all(|x| x.is_positive());
    Ok(Embedding {
        rc: RecurrenceCoefficients::new(c, d)?,
        polys,
        interlacing,
    })
}

/// Rows `b_{1..n,n}` for `n = 1..=k-2` forced by `Q_k` and `Q_{k-1}`.
/// Entry `j` of the result is the row for `n = j + 1`.
pub fn initial_coefficients<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    q_k: &PolyInPBasis<S>,
    q_km1: &PolyInPBasis<S>,
) -> Result<Vec<Vec<S>>> {
    let k = q_k
        .degree()
        .ok_or_else(|| Error::InvalidParameter("Q_k is zero".into()))?;
    if k < 2 {
        return Ok(Vec::new());
    }
    let upper = q_k.to_monomial(rc_p)?;
    let lower = q_km1.to_monomial(rc_p)?;
    let emb = backward_embed(&upper, &lower).map_err(|e| match e {
        Error::DegenerateRemainder { degree } => Error::NotRegular { index: degree },
        other => other,
    })?;
    let mut out = Vec::with_capacity(k.saturating_sub(2));
    for n in 1..=k - 2 {
        let e = rc_p.expand_in_p(&emb.polys[n])?;
        out.push((1..=n).map(|i| e.coeff(n - i)).collect());
    }
    Ok(out)
}

/// Largest residuals of the orthogonality conditions over the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub k: usize,
    pub n_max: usize,
    /// `beta~_n` against `beta_n + b_{1,n} - b_{1,n+1}`.
    pub beta_tilde: f64,
    /// `gamma~_n` against its defining expression.
    pub gamma_tilde: f64,
    /// `gamma~_n b_{k-1,n-1} - b_{k-1,n} gamma_{n-k+1}`, `n >= k`.
    pub ratio_identity: f64,
    /// Coefficient comparison for `P_{n-2}..P_{n-k}`.
    pub coefficient_conditions: f64,
    /// Smallest `|b_{k-1,n}|` over `n >= k-1`.
    pub min_last_coefficient: f64,
    /// First `n` at which some condition fails.
    pub first_failure: Option<usize>,
    pub holds: bool,
}

/// Evaluates every orthogonality condition linking `table` and `qt` for
/// `1 <= n <= n_max`.
pub fn check_theorem1<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    n_max: usize,
) -> Result<Theorem1Report> {
    let k = table.k();
    if table.max_n() < n_max + 1 || qt.rc_q.len() < n_max || rc_p.len() < n_max {
        return Err(Error::IndexOutOfRange {
            index: n_max + 1,
            available: table.max_n(),
        });
    }
    let beta = |n: usize| rc_p.beta(n).clone();
    let gamma = |n: usize| rc_p.gamma(n).clone();
    let mut worst = [0f64; 4];
    let mut first_failure = None;
    let mut flag = |slot: usize, n: usize, lhs: S, rhs: S, worst: &mut [f64; 4]| {
        let diff = lhs.clone() - rhs.clone();
        let r = diff.as_f64().abs();
        if r > worst[slot] {
            worst[slot] = r;
        }
        if !diff.is_negligible(&max_abs([&lhs, &rhs])) && first_failure.is_none() {
            first_failure = Some(n);
        }
    };
    for n in 0..=n_max {
        let b1 = table.b(1, n);
        let b1n = table.b(1, n + 1);
        flag(
            0,
            n,
            qt.rc_q.beta(n).clone(),
            beta(n) + b1.clone() - b1n.clone(),
            &mut worst,
        );
        if n == 0 {
            continue;
        }
        let gt = qt.rc_q.gamma(n).clone();
        flag(
            1,
            n,
            gt.clone(),
            gamma_tilde_direct(rc_p, table, n),
            &mut worst,
        );
        if k >= 2 && n >= k {
            flag(
                2,
                n,
                gt.clone() * table.b(k - 1, n - 1),
                table.b(k - 1, n) * gamma(n + 1 - k),
                &mut worst,
            );
        }
        let shift_base = -beta(n) - b1.clone() + b1n.clone();
        for i in 1..k.saturating_sub(2) {
            if n < i + 1 {
                continue;
            }
            let rhs = table.b(i, n) * gamma(n - i) + table.b(i + 2, n) - table.b(i + 2, n + 1)
                + table.b(i + 1, n) * (beta(n - 1 - i) + shift_base.clone());
            flag(3, n, table.b(i, n - 1) * gt.clone(), rhs, &mut worst);
        }
        if k >= 2 && n + 1 >= k {
            let rhs = table.bs(k as isize - 2, n) * gamma(n + 2 - k)
                + table.b(k - 1, n) * (beta(n + 1 - k) + shift_base.clone());
            flag(
                3,
                n,
                table.bs(k as isize - 2, n - 1) * gt.clone(),
                rhs,
                &mut worst,
            );
        }
    }
    let mut min_last = f64::INFINITY;
    let mut zero_last = None;
    if k >= 2 {
        for n in k - 1..=n_max + 1 {
            let v = table.b(k - 1, n);
            min_last = min_last.min(v.as_f64().abs());
            if v.is_zeroish() && zero_last.is_none() {
                zero_last = Some(n);
            }
        }
    }
    let first_failure = match (first_failure, zero_last) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(Theorem1Report {
        k,
        n_max,
        beta_tilde: worst[0],
        gamma_tilde: worst[1],
        ratio_identity: worst[2],
        coefficient_conditions: worst[3],
        min_last_coefficient: min_last,
        first_failure,
        holds: first_failure.is_none(),
    })
}

/// Verdict of [`verify_constant_case`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConstantCaseReport<S: Scalar> {
    pub holds: bool,
    /// First violated `(i, n)`.
    pub witness: Option<(usize, usize)>,
    /// `beta~_n = beta_n` for `n = k+1..=n_max` when the conditions hold.
    #[serde(with = "serde_scalar::vec")]
    pub beta_tilde: Vec<S>,
    /// `gamma~_n = gamma_{n-k+1}` for `n = k+1..=n_max` when the conditions hold.
    #[serde(with = "serde_scalar::vec")]
    pub gamma_tilde: Vec<S>,
}

/// Conditions for `b_{i,n} = b_i` constant in `n`, checked for
/// `k+1 <= n <= n_max`.
pub fn verify_constant_case<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    k: usize,
    b: &[S],
    n_max: usize,
) -> Result<ConstantCaseReport<S>> {
    if k < 2 || b.len() != k - 1 {
        return Err(Error::InvalidInit {
            expected: k.saturating_sub(1),
            got: b.len(),
        });
    }
    if b[k - 2].is_zeroish() {
        return Err(Error::QuasiOrthogonalityViolated { n: k });
    }
    if rc_p.len() < n_max {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            available: rc_p.len(),
        });
    }
    let beta = |n: usize| rc_p.beta(n).clone();
    let gamma = |n: usize| rc_p.gamma(n).clone();
    let bi = |i: usize| if i == 0 { S::one() } else { b[i - 1].clone() };
    let mut witness = None;
    'outer: for n in k + 1..=n_max {
        for i in 1..k {
            let (lhs, rhs) = if i == 1 {
                (gamma(n + 1 - k) - gamma(n), bi(1) * (beta(n - 1) - beta(n)))
            } else {
                (
                    bi(i - 1) * (gamma(n + 1 - k) - gamma(n + 1 - i)),
                    bi(i) * (beta(n - i) - beta(n)),
                )
            };
            let scale = max_abs([&gamma(n), &gamma(n + 1 - k), &beta(n)]);
            if !(lhs - rhs).is_negligible(&scale) {
                witness = Some((i, n));
                break 'outer;
            }
        }
    }
    let holds = witness.is_none();
    let (beta_tilde, gamma_tilde) = if holds && n_max > k {
        (
            (k + 1..=n_max).map(beta).collect(),
            (k + 1..=n_max).map(|n| gamma(n + 1 - k)).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(ConstantCaseReport {
        holds,
        witness,
        beta_tilde,
        gamma_tilde,
    })
}

/// Period forced on `gamma_n` (`n >= 2`) in the symmetric constant case:
/// the gcd of `k-1` and every `j <= (k-1)/2` with `|b_j| + |b_{k-1-j}| != 0`.
pub fn periodicity_analysis<S: Scalar>(k: usize, b: &[S]) -> Result<usize> {
    if k < 2 || b.len() != k - 1 {
        return Err(Error::InvalidInit {
            expected: k.saturating_sub(1),
            got: b.len(),
        });
    }
    if b[k - 2].is_zeroish() {
        return Err(Error::QuasiOrthogonalityViolated { n: k });
    }
    let bi = |i: usize| b[i - 1].abs();
    let mut period = k - 1;
    for j in 1..=(k - 1) / 2 {
        if !(bi(j) + bi(k - 1 - j)).is_zeroish() {
            period = num_integer::gcd(period, j);
        }
    }
    Ok(period)
}
