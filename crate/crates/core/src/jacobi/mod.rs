//! Jacobi matrices of `P` and `Q`, the banded connection matrices between
//! them and the finite-section identities they satisfy.

mod eigen;

pub use eigen::{eigen_nodes_weights, QuadratureRule};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geronimus::GeronimusPoly;
use crate::linalg::DenseMatrix;
use crate::poly::Poly;
use crate::quasi::{ConnectionTable, QTilde};
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::{serde_scalar, Scalar};

/// Leading `m x m` block of a monic Jacobi matrix: `beta` on the diagonal,
/// ones above it, `gamma` below it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JacobiTruncation<S: Scalar> {
    /// `beta_0..beta_{m-1}`.
    #[serde(with = "serde_scalar::vec")]
    diag: Vec<S>,
    /// `gamma_1..gamma_{m-1}`.
    #[serde(with = "serde_scalar::vec")]
    sub: Vec<S>,
}

impl<S: Scalar> JacobiTruncation<S> {
    pub fn new(diag: Vec<S>, sub: Vec<S>) -> Result<Self> {
        if diag.is_empty() || sub.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "truncation needs m diagonal and m-1 sub-diagonal entries, got {} and {}",
                diag.len(),
                sub.len()
            )));
        }
        Ok(JacobiTruncation { diag, sub })
    }

    /// Size `m` block of the Jacobi matrix of `rc`; needs indices through `m-1`.
    pub fn from_recurrence(rc: &RecurrenceCoefficients<S>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "truncation size must be positive".into(),
            ));
        }
        if m - 1 > rc.len() {
            return Err(Error::IndexOutOfRange {
                index: m - 1,
                available: rc.len(),
            });
        }
        Ok(JacobiTruncation {
            diag: rc.betas()[..m].to_vec(),
            sub: rc.gammas()[..m - 1].to_vec(),
        })
    }

    /// Reads a tridiagonal matrix back, insisting on exact band structure
    /// (negligible entries count as zero in float mode).
    pub fn from_dense(a: &DenseMatrix<S>) -> Result<Self> {
        let m = a.rows();
        let scale = a.max_abs();
        for r in 0..m {
            for c in 0..m {
                let entry = &a[(r, c)];
                let ok = if c == r + 1 {
                    (entry.clone() - S::one()).is_negligible(&scale)
                } else if r > c + 1 || c > r + 1 {
                    entry.is_negligible(&scale)
                } else {
                    true
                };
                if !ok {
                    return Err(Error::NotTridiagonal { row: r, col: c });
                }
            }
        }
        Ok(JacobiTruncation {
            diag: (0..m).map(|i| a[(i, i)].clone()).collect(),
            sub: (1..m).map(|i| a[(i, i - 1)].clone()).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn sub(&self) -> &[S] {
        &self.sub
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        DenseMatrix::from_fn(self.size(), self.size(), |r, c| {
            if r == c {
                self.diag[r].clone()
            } else if c == r + 1 {
                S::one()
            } else if r == c + 1 {
                self.sub[c].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn to_recurrence(&self) -> Result<RecurrenceCoefficients<S>> {
        RecurrenceCoefficients::new(self.diag.clone(), self.sub.clone())
    }

    /// `det(xI - J)`, the degree-`m` monic polynomial of the recurrence.
    pub fn characteristic_polynomial(&self) -> Poly<S> {
        let mut prev = Poly::one();
        let mut cur = Poly::linear_root(self.diag[0].clone());
        for j in 1..self.size() {
            let next =
                &(&Poly::linear_root(self.diag[j].clone()) * &cur) - &prev.scale(&self.sub[j - 1]);
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// `A~` with `Q = A~ P` and `B~` with `h~(x) P = B~ Q`, both `m x m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BandedConnection<S: Scalar> {
    pub k: usize,
    pub a_tilde: DenseMatrix<S>,
    pub b_tilde: DenseMatrix<S>,
}

/// Unit lower-triangular `m x m` matrix with `a~_{n, n-i} = b_{i,n}`.
pub fn a_tilde<S: Scalar>(table: &ConnectionTable<S>, m: usize) -> Result<DenseMatrix<S>> {
    if m == 0 || table.max_n() < m - 1 {
        return Err(Error::IndexOutOfRange {
            index: m.saturating_sub(1),
            available: table.max_n(),
        });
    }
    let k = table.k();
    Ok(DenseMatrix::from_fn(m, m, |r, c| {
        if c <= r && r - c < k {
            table.b(r - c, r)
        } else {
            S::zero()
        }
    }))
}

/// `p(J)` for a tridiagonal `J`, by Horner's rule on matrices.
pub fn poly_of_matrix<S: Scalar>(p: &Poly<S>, j: &DenseMatrix<S>) -> DenseMatrix<S> {
    let m = j.rows();
    p.coeffs()
        .iter()
        .rev()
        .fold(DenseMatrix::zeros(m, m), |acc, c| {
            acc.mul(j).add(&DenseMatrix::identity(m).scale(c))
        })
}

impl<S: Scalar> BandedConnection<S> {
    /// Builds both factors of size `m`. `B~` is read off `h~(J_P) = B~ A~`
    /// column by column from its unit entry at `(s, s+k-1)`, so the table
    /// must reach row `m+k-2` and `rc_p` index `m+2k-2`.
    pub fn new(
        rc_p: &RecurrenceCoefficients<S>,
        table: &ConnectionTable<S>,
        h: &GeronimusPoly<S>,
        m: usize,
    ) -> Result<Self> {
        let k = table.k();
        if h.k != k {
            return Err(Error::InvalidParameter(format!(
                "h has degree {} but the table has k = {k}",
                h.k - 1
            )));
        }
        let wide = m + k - 1;
        let big = m + 2 * k - 1;
        let jp = JacobiTruncation::from_recurrence(rc_p, big)?.to_dense();
        let hp = poly_of_matrix(&h.monic(), &jp);
        let a_wide = a_tilde(table, wide)?;
        let mut b = DenseMatrix::zeros(m, m);
        for s in 0..m {
            // row s of B~ lives in columns s..=s+k-1
            let mut row = vec![S::zero(); k];
            row[k - 1] = S::one();
            for off in (0..k - 1).rev() {
                let l = s + off;
                let mut acc = hp[(s, l)].clone();
                for t in off + 1..k {
                    acc = acc - row[t].clone() * a_wide[(s + t, l)].clone();
                }
                row[off] = acc;
            }
            for (off, val) in row.into_iter().enumerate() {
                if s + off < m {
                    b[(s, s + off)] = val;
                }
            }
        }
        Ok(BandedConnection {
            k,
            a_tilde: a_tilde(table, m)?,
            b_tilde: b,
        })
    }

    pub fn size(&self) -> usize {
        self.a_tilde.rows()
    }
}

/// `(J_Q)_{n+1} = A~ [(J_P)_{n+1} - e_{n+1} sum_i b_{i,n+1} e_{n+2-i}^T] A~^{-1}`.
/// The result is checked, not assumed, to be tridiagonal with unit
/// super-diagonal.
pub fn build_jq_from_similarity<S: Scalar>(
    jp: &JacobiTruncation<S>,
    table: &ConnectionTable<S>,
) -> Result<JacobiTruncation<S>> {
    let m = jp.size();
    if table.max_n() < m {
        return Err(Error::IndexOutOfRange {
            index: m,
            available: table.max_n(),
        });
    }
    let a = a_tilde(table, m)?;
    let mut perturbed = jp.to_dense();
    for i in 1..table.k() {
        if i <= m {
            let c = m - i;
            perturbed[(m - 1, c)] = perturbed[(m - 1, c)].clone() - table.b(i, m);
        }
    }
    let jq = a.mul(&perturbed).mul(&a.unit_lower_inverse());
    JacobiTruncation::from_dense(&jq)
}

/// Residuals of `h~(J_P) = B~ A~` and `h~(J_Q) = A~ B~` on the interior
/// block `k..m-k`, out of reach of the truncation boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub size: usize,
    pub k: usize,
    pub interior: (usize, usize),
    pub ul_residual: f64,
    pub lu_residual: f64,
    pub holds: bool,
}

pub fn factorization_check<S: Scalar>(
    jp: &JacobiTruncation<S>,
    jq: &JacobiTruncation<S>,
    conn: &BandedConnection<S>,
    h_monic: &Poly<S>,
) -> Result<FactorizationReport> {
    let m = jp.size();
    let k = conn.k;
    if jq.size() != m || conn.size() != m {
        return Err(Error::InvalidParameter(
            "operands must share one truncation size".into(),
        ));
    }
    if m < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "truncation size {m} leaves no interior for k = {k}"
        )));
    }
    let (lo, hi) = (k, m - k);
    let hp = poly_of_matrix(h_monic, &jp.to_dense());
    let hq = poly_of_matrix(h_monic, &jq.to_dense());
    let ul = hp.sub(&conn.b_tilde.mul(&conn.a_tilde));
    let lu = hq.sub(&conn.a_tilde.mul(&conn.b_tilde));
    let ul_res = ul.max_abs_in(lo, hi, lo, hi);
    let lu_res = lu.max_abs_in(lo, hi, lo, hi);
    let scale = hp.max_abs_in(lo, hi, lo, hi);
    let holds = ul_res.is_negligible(&scale) && lu_res.is_negligible(&scale);
    Ok(FactorizationReport {
        size: m,
        k,
        interior: (lo, hi),
        ul_residual: ul_res.as_f64(),
        lu_residual: lu_res.as_f64(),
        holds,
    })
}

/// Largest entry of `A~ J_P - J_Q A~` over rows `0..m-1`; the last row is
/// where the rank-one correction lives.
pub fn intertwining_residual<S: Scalar>(
    jp: &JacobiTruncation<S>,
    jq: &JacobiTruncation<S>,
    table: &ConnectionTable<S>,
) -> Result<S> {
    let m = jp.size();
    let a = a_tilde(table, m)?;
    let diff = a.mul(&jp.to_dense()).sub(&jq.to_dense().mul(&a));
    Ok(diff.max_abs_in(0, m - 1, 0, m))
}

/// Residuals of the three finite-section identities
/// `x P = J_P P + P_{n+1} e`, `x Q = J_Q Q + Q_{n+1} e` and `Q = A~ P`,
/// as polynomial identities and at sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub n: usize,
    pub p_recurrence: f64,
    pub q_recurrence: f64,
    pub connection: f64,
    pub max_point_residual: f64,
    pub holds: bool,
}

fn max_coeff<S: Scalar>(polys: &[Poly<S>]) -> S {
    polys
        .iter()
        .flat_map(|p| p.coeffs().iter().map(|c| c.abs()))
        .fold(S::zero(), |a, b| if b > a { b } else { a })
}

fn section_residuals<S: Scalar>(j: &JacobiTruncation<S>, polys: &[Poly<S>]) -> Vec<Poly<S>> {
    let m = j.size();
    let jd = j.to_dense();
    (0..m)
        .map(|r| {
            let mut rhs = Poly::zero();
            for c in r.saturating_sub(1)..(r + 2).min(m) {
                rhs = &rhs + &polys[c].scale(&jd[(r, c)]);
            }
            if r == m - 1 {
                rhs = &rhs + &polys[m];
            }
            &(&Poly::x() * &polys[r]) - &rhs
        })
        .collect()
}

pub fn truncation_identity_check<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    n: usize,
    points: &[S],
) -> Result<TruncationReport> {
    let jp = JacobiTruncation::from_recurrence(rc_p, n + 1)?;
    let jq = JacobiTruncation::from_recurrence(&qt.rc_q, n + 1)?;
    let p = rc_p.polys(n + 1)?;
    if table.max_n() < n + 1 {
        return Err(Error::IndexOutOfRange {
            index: n + 1,
            available: table.max_n(),
        });
    }
    let q = table.q_polys(rc_p, n + 1)?;
    let rp = section_residuals(&jp, &p);
    let rq = section_residuals(&jq, &q);
    let a = a_tilde(table, n + 1)?;
    let rc: Vec<Poly<S>> = (0..=n)
        .map(|r| {
            let rhs = (0..=r).fold(Poly::zero(), |acc, c| &acc + &p[c].scale(&a[(r, c)]));
            &q[r] - &rhs
        })
        .collect();
    let all: Vec<&Poly<S>> = rp.iter().chain(&rq).chain(&rc).collect();
    let mut point_res = S::zero();
    for x in points {
        for r in &all {
            let v = r.eval(x).abs();
            if v > point_res {
                point_res = v;
            }
        }
    }
    let scale = larger(max_coeff(&q), max_coeff(&p));
    let (e22, e23, e24) = (max_coeff(&rp), max_coeff(&rq), max_coeff(&rc));
    let holds = e22.is_negligible(&scale)
        && e23.is_negligible(&scale)
        && e24.is_negligible(&scale)
        && point_res.is_negligible(&scale);
    Ok(TruncationReport {
        n,
        p_recurrence: e22.as_f64(),
        q_recurrence: e23.as_f64(),
        connection: e24.as_f64(),
        max_point_residual: point_res.as_f64(),
        holds,
    })
}

fn larger<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}
