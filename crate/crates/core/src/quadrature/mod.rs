//! Gaussian-type rules for `v`, their Christoffel numbers and the
//! diagnostics on where the nodes may lie.

mod kernel;
mod zeros;

pub use kernel::{
    confluent_kernel_v, confluent_kernel_v_derivative_form, kernel_identity_check, kernel_u,
    kernel_v, KernelMatrices, KernelReport,
};
pub use zeros::{
    count_with_multiplicity, count_zeros_in_interval, default_support, descartes_bound,
    sign_changes, sturm_chain, zeros_outside_support, DescartesReport, ZeroCount,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geronimus::{norm_q, GeronimusPoly};
use crate::jacobi::{eigen_nodes_weights, JacobiTruncation, QuadratureRule};
use crate::quasi::{ConnectionTable, QTilde};
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::Scalar;

/// Relative agreement demanded between eigenvector weights and `1 / K`.
pub const WEIGHT_TOLERANCE: f64 = 1e-10;

/// Christoffel numbers `1 / K_{m-1}(y, y; v)` at zeros `y` of `Q_m`.
///
/// At such a zero, `(Q_j(y) / ||Q_j||)_{j<m}` is the null vector of the
/// symmetrized truncation, so the `Q_j(y)` are obtained by inverse
/// iteration rather than by running the recurrence forward: at nodes
/// outside the support of `u` the sequence decays and forward evaluation
/// amplifies rounding along the growing solution.
pub fn kernel_weights<S: Scalar>(
    qt: &QTilde<S>,
    v0: &S,
    m: usize,
    nodes: &[f64],
) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("rule size must be positive".into()));
    }
    let rc = qt.rc_q.truncate(m - 1)?.to_f64()?;
    if let Some(i) = rc.gammas().iter().position(|g| *g <= 0.0) {
        return Err(Error::NotPositiveDefinite { index: i + 1 });
    }
    let off: Vec<f64> = rc.gammas().iter().map(|g| g.sqrt()).collect();
    let v0 = v0.as_f64();
    Ok(nodes
        .iter()
        .map(|y| {
            let phi = null_vector(rc.betas(), &off, *y);
            // K = (1/v0) sum_j (Q_j(y) / sqrt(gamma_1..gamma_j))^2 with Q_0 = 1
            let k: f64 = phi.iter().map(|p| (p / phi[0]).powi(2)).sum::<f64>() / v0;
            1.0 / k
        })
        .collect())
}

/// Two steps of inverse iteration on `T - yI`, `T` symmetric tridiagonal,
/// with a partially pivoted LU of the shifted matrix.
fn null_vector(diag: &[f64], off: &[f64], y: f64) -> Vec<f64> {
    let m = diag.len();
    if m == 1 {
        return vec![1.0];
    }
    let norm = diag.iter().chain(off).fold(0.0f64, |a, b| a.max(b.abs()));
    let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let mut d: Vec<f64> = diag.iter().map(|b| b - y).collect();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; m.saturating_sub(2)];
    let mut swap = vec![false; m - 1];
    for i in 0..m - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - f * d[i + 1];
            if i + 2 < m {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            swap[i] = true;
        }
    }
    if d[m - 1] == 0.0 {
        d[m - 1] = tiny;
    }
    let mut x = vec![1.0; m];
    for _ in 0..2 {
        for i in 0..m - 1 {
            if swap[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= dl[i] * x[i];
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            if i + 1 < m {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < m {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        let scale = x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        x.iter_mut().for_each(|v| *v /= scale);
    }
    x
}

/// Size-`m` rule for `v` from the recurrence of `Q`. The eigenvector
/// weights are cross-checked against `1 / K_{m-1}(y_j, y_j; v)`.
pub fn build_rule<S: Scalar>(qt: &QTilde<S>, v0: &S, m: usize) -> Result<QuadratureRule> {
    let j = JacobiTruncation::from_recurrence(&qt.rc_q, m)?;
    let rule = eigen_nodes_weights(&j, v0)?;
    let alt = kernel_weights(qt, v0, m, &rule.nodes)?;
    for (i, (w, a)) in rule.weights.iter().zip(&alt).enumerate() {
        let rel = (w - a).abs() / a.abs();
        if !(rel <= WEIGHT_TOLERANCE) {
            return Err(Error::CrossCheck(format!(
                "weight {i}: eigenvector {w:e} vs kernel {a:e}"
            )));
        }
    }
    Ok(rule)
}

/// For `k = 2`, `h = h_1 (x - a)`: the weight at a zero `y` of `Q_m` is
/// `||Q_m||^2 / [b_{1,m} (y - a) P_{m-1}(y) Q_m'(y)]`.
pub fn christoffel_numbers_k2<S: Scalar>(
    rc_p: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
    qt: &QTilde<S>,
    h: &GeronimusPoly<S>,
    v0: &S,
    nodes: &[S],
) -> Result<Vec<S>> {
    if table.k() != 2 || h.k != 2 {
        return Err(Error::InvalidParameter("closed form needs k = 2".into()));
    }
    let m = nodes.len();
    let a = -h.h[0].clone() / h.h[1].clone();
    let b1 = table.b(1, m);
    let nq = norm_q(qt, m, v0);
    nodes
        .iter()
        .map(|y| {
            let (p, dp) = rc_p.eval_all_with_derivative(m, y)?;
            let dq = dp[m].clone() + b1.clone() * dp[m - 1].clone();
            Ok(nq.clone() / (b1.clone() * (y.clone() - a.clone()) * p[m - 1].clone() * dq))
        })
        .collect()
}

/// How well a rule reproduces the moments `v_0, v_1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub size: usize,
    /// `|Q(x^j) - v_j| / max(|v_j|, sum_i w_i |x_i|^j)` for `j <= 2m-1`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// The same quantity at `j = 2m`, when that moment was supplied.
    pub first_inexact: Option<f64>,
    pub holds: bool,
}

pub fn exactness_report(
    rule: &QuadratureRule,
    moments: &[f64],
    tol: f64,
) -> Result<ExactnessReport> {
    let top = rule.exactness_degree;
    if moments.len() <= top {
        return Err(Error::IndexOutOfRange {
            index: top,
            available: moments.len().saturating_sub(1),
        });
    }
    let rel = |j: usize| {
        let approx = rule.integrate(|x| x.powi(j as i32));
        let size = rule.integrate(|x| x.abs().powi(j as i32));
        (approx - moments[j]).abs() / moments[j].abs().max(size)
    };
    let residuals: Vec<f64> = (0..=top).map(rel).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(ExactnessReport {
        size: rule.size,
        max_residual,
        first_inexact: (moments.len() > top + 1).then(|| rel(top + 1)),
        holds: max_residual <= tol,
        residuals,
    })
}
