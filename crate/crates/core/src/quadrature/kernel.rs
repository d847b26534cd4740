//! Christoffel-Darboux kernels of `u` and `v` and the matrix identities
//! linking them through the connection coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geronimus::{norm_q, GeronimusPoly};
use crate::linalg::DenseMatrix;
use crate::quasi::{ConnectionTable, QTilde};
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::Scalar;

/// `sum_{j<=n} P_j(x) P_j(y) / norms[j]` for the family of `rc`.
pub fn kernel_u<S: Scalar>(
    rc: &RecurrenceCoefficients<S>,
    norms: &[S],
    n: usize,
    x: &S,
    y: &S,
) -> Result<S> {
    if norms.len() <= n {
        return Err(Error::IndexOutOfRange {
            index: n,
            available: norms.len().saturating_sub(1),
        });
    }
    let px = rc.eval_all(n, x)?;
    let py = rc.eval_all(n, y)?;
    Ok((0..=n).fold(S::zero(), |acc, j| {
        acc + px[j].clone() * py[j].clone() / norms[j].clone()
    }))
}

/// `K_n(x, y; v)` by direct summation over `Q_j` from the recurrence of `qt`.
pub fn kernel_v<S: Scalar>(qt: &QTilde<S>, v0: &S, n: usize, x: &S, y: &S) -> Result<S> {
    let norms = qt.rc_q.norms(n, v0)?;
    kernel_u(&qt.rc_q, &norms, n, x, y)
}

/// The `(k-1) x (k-1)` blocks at level `n`: `T` lower triangular with
/// `T[r][c] = b_{k-1-r+c, n+1+c}`, `Z` unit upper triangular with
/// `Z[r][c] = b_{c-r, n+1+c}`, `D = diag(1 / ||Q_{n+1+j}||^2)`, `L = T D`
/// and `M = Z D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct KernelMatrices<S: Scalar> {
    pub n: usize,
    pub t: DenseMatrix<S>,
    pub d: DenseMatrix<S>,
    pub z: DenseMatrix<S>,
    pub l: DenseMatrix<S>,
    pub m: DenseMatrix<S>,
}

impl<S: Scalar> KernelMatrices<S> {
    /// Needs table rows and `gamma~` through `n+k-1`.
    pub fn new(table: &ConnectionTable<S>, qt: &QTilde<S>, v0: &S, n: usize) -> Result<Self> {
        let k = table.k();
        let top = n + k - 1;
        if table.max_n() < top || qt.rc_q.len() < top {
            return Err(Error::IndexOutOfRange {
                index: top,
                available: table.max_n().min(qt.rc_q.len()),
            });
        }
        let dim = k - 1;
        let t = DenseMatrix::from_fn(dim, dim, |r, c| {
            if r >= c {
                table.b(k - 1 - r + c, n + 1 + c)
            } else {
                S::zero()
            }
        });
        let z = DenseMatrix::from_fn(dim, dim, |r, c| {
            if c >= r {
                table.b(c - r, n + 1 + c)
            } else {
                S::zero()
            }
        });
        let mut d = DenseMatrix::zeros(dim, dim);
        for j in 0..dim {
            let nq = norm_q(qt, n + 1 + j, v0);
            if nq.is_zeroish() {
                return Err(Error::NotRegular { index: n + 1 + j });
            }
            d[(j, j)] = S::one() / nq;
        }
        Ok(KernelMatrices {
            n,
            l: t.mul(&d),
            m: z.mul(&d),
            t,
            d,
            z,
        })
    }
}

/// Values needed at one point: `P_0..P_{n+k-1}` and `Q_0..Q_{n+k-1}`.
struct PointData<S: Scalar> {
    p: Vec<S>,
    q: Vec<S>,
}

fn point_data<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    top: usize,
    x: &S,
) -> Result<PointData<S>> {
    let p = rc_p.eval_all(top, x)?;
    let q = table.q_values(&p, top);
    Ok(PointData { p, q })
}

/// `sum_{r,c} left[from + r] * mat[r][c] * right[n + 1 + c]`.
fn bilinear<S: Scalar>(left: &[S], from: usize, mat: &DenseMatrix<S>, right: &[S], n: usize) -> S {
    let dim = mat.rows();
    let mut acc = S::zero();
    for r in 0..dim {
        for c in 0..dim {
            acc = acc + left[from + r].clone() * mat[(r, c)].clone() * right[n + 1 + c].clone();
        }
    }
    acc
}

/// Maximum residuals over the sample points of the four kernel identities.
/// `NaN`-free: a quotient form with `h(x) = h(y)` is skipped and counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub n: usize,
    pub k: usize,
    pub points: usize,
    pub kernel_v: f64,
    pub kernel_u_quotient: f64,
    pub kernel_v_quotient: f64,
    pub extended: f64,
    pub skipped_quotients: usize,
    pub holds: bool,
}

/// Evaluates both sides of
/// `K_n(v) = h(y) K_n(u) - P(x)^T L Q(y)`, its two quotient forms, and
/// `K_{n+k-1}(v) = [h(x) P'(x)^T M Q(y) - h(y) P'(y)^T M Q(x)] / (h(x) - h(y))`
/// at each `(x, y)`. Norms of `P` use `<u, 1> = 1`, norms of `Q` use `v0`.
pub fn kernel_identity_check<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    h: &GeronimusPoly<S>,
    v0: &S,
    n: usize,
    points: &[(S, S)],
) -> Result<KernelReport> {
    let k = table.k();
    if n + 1 < k {
        return Err(Error::InvalidParameter(format!(
            "n = {n} too small for k = {k}"
        )));
    }
    let top = n + k - 1;
    let mats = KernelMatrices::new(table, qt, v0, n)?;
    let norms_u = rc_p.norms(n, &S::one())?;
    let norms_v = qt.rc_q.norms(top, v0)?;
    let from = n + 1 - (k - 1);
    let mut res = [S::zero(), S::zero(), S::zero(), S::zero()];
    let mut skipped = 0;
    let mut scale = S::one();
    let bump = |slot: &mut S, v: S| {
        let a = v.abs();
        if a > *slot {
            *slot = a;
        }
    };
    for (x, y) in points {
        let dx = point_data(rc_p, table, top, x)?;
        let dy = point_data(rc_p, table, top, y)?;
        let (hx, hy) = (h.eval(x), h.eval(y));
        let ku = kernel_u(rc_p, &norms_u, n, x, y)?;
        let kv = kernel_u(&qt.rc_q, &norms_v, n, x, y)?;
        let kv_ext = kernel_u(&qt.rc_q, &norms_v, top, x, y)?;
        let a_xy = bilinear(&dx.p, from, &mats.l, &dy.q, n);
        let a_yx = bilinear(&dy.p, from, &mats.l, &dx.q, n);
        let b_xy = bilinear(&dx.p, n + 1, &mats.m, &dy.q, n);
        let b_yx = bilinear(&dy.p, n + 1, &mats.m, &dx.q, n);
        bump(&mut scale, kv.clone());
        bump(&mut scale, ku.clone());
        bump(
            &mut res[0],
            kv.clone() - (hy.clone() * ku.clone() - a_xy.clone()),
        );
        let dh = hx.clone() - hy.clone();
        let dh_scale = hx.abs() + hy.abs();
        let far = if S::EXACT {
            !dh.is_zero()
        } else {
            dh.abs() > S::from_ratio(1, 100_000_000) * dh_scale
        };
        if !far {
            skipped += 1;
            continue;
        }
        bump(&mut res[1], ku - (a_yx.clone() - a_xy.clone()) / dh.clone());
        bump(
            &mut res[2],
            kv - (hy.clone() * a_yx - hx.clone() * a_xy) / dh.clone(),
        );
        bump(&mut res[3], kv_ext - (hx * b_xy - hy * b_yx) / dh);
    }
    let holds = res.iter().all(|r| r.is_negligible(&scale));
    Ok(KernelReport {
        n,
        k,
        points: points.len(),
        kernel_v: res[0].as_f64(),
        kernel_u_quotient: res[1].as_f64(),
        kernel_v_quotient: res[2].as_f64(),
        extended: res[3].as_f64(),
        skipped_quotients: skipped,
        holds,
    })
}

/// `K_n(x, x; v) = h(x) K_n(x, x; u) - P(x)^T L Q(x)`, with no division.
pub fn confluent_kernel_v<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    h: &GeronimusPoly<S>,
    v0: &S,
    n: usize,
    x: &S,
) -> Result<S> {
    let k = table.k();
    let top = n + k - 1;
    let mats = KernelMatrices::new(table, qt, v0, n)?;
    let norms_u = rc_p.norms(n, &S::one())?;
    let d = point_data(rc_p, table, top, x)?;
    let ku = kernel_u(rc_p, &norms_u, n, x, x)?;
    Ok(h.eval(x) * ku - bilinear(&d.p, n + 2 - k, &mats.l, &d.q, n))
}

/// The derivative form
/// `[(h P)'^T L Q - h P^T L Q'] / (-h')`, undefined where `h'(x) = 0`.
pub fn confluent_kernel_v_derivative_form<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    h: &GeronimusPoly<S>,
    v0: &S,
    n: usize,
    x: &S,
) -> Result<S> {
    let k = table.k();
    let top = n + k - 1;
    let hp = h.poly();
    let dh = hp.derivative().eval(x);
    let hx = hp.eval(x);
    if dh.is_negligible(&hx) {
        return Err(Error::DerivativeFormSingular);
    }
    let mats = KernelMatrices::new(table, qt, v0, n)?;
    let (p, dp) = rc_p.eval_all_with_derivative(top, x)?;
    let q = table.q_values(&p, top);
    let dq = table.q_values(&dp, top);
    let from = n + 2 - k;
    let hp_der: Vec<S> = p
        .iter()
        .zip(&dp)
        .map(|(pv, dv)| dh.clone() * pv.clone() + hx.clone() * dv.clone())
        .collect();
    let first = bilinear(&hp_der, from, &mats.l, &q, n);
    let second = bilinear(&p, from, &mats.l, &dq, n);
    Ok((first - hx * second) / -dh)
}
