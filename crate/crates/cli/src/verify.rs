//! `verify`: every identity the library can check, run on one configuration.

use std::fmt::Write as _;

use clap::ValueEnum;
use quasiquad::geronimus::{
    explicit_leading_coefficient, h_ratio_check, solve_h, u_moments_from_v,
};
use quasiquad::jacobi::{
    build_jq_from_similarity, factorization_check, intertwining_residual,
    truncation_identity_check, BandedConnection, JacobiTruncation,
};
use quasiquad::quadrature::{
    build_rule, default_support, descartes_bound, exactness_report, kernel_identity_check,
    zeros_outside_support,
};
use quasiquad::quasi::{
    check_theorem1, periodicity_analysis, verify_constant_case, ConnectionTable, QTilde,
};
use quasiquad::{moments_from_recurrence, Rational, RecurrenceCoefficients, Scalar};
use serde::{Deserialize, Serialize};

use crate::config::Job;
use crate::run::{Rendered, Setup, EXACTNESS_TOL};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Theorem1,
    Geronimus,
    Kernels,
    Matrices,
    Periodicity,
    Zeros,
    All,
}

impl Which {
    fn includes(self, other: Which) -> bool {
        self == Which::All || self == other
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub family: String,
    pub mode: String,
    pub k: usize,
    pub which: Which,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Fixed evaluation points for the kernel identities.
const POINTS: [(i64, i64, i64, i64); 6] = [
    (1, 3, -2, 5),
    (-7, 4, 1, 2),
    (5, 2, 3, 7),
    (0, 1, 9, 4),
    (-1, 6, -5, 3),
    (11, 5, -3, 8),
];

struct Ctx<S: Scalar> {
    setup: Setup<S>,
    depth: usize,
    table: ConnectionTable<S>,
    qt: QTilde<S>,
}

fn record(out: &mut Vec<Check>, name: &str, result: Result<(bool, String), CliError>) {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    out.push(Check {
        name: name.into(),
        passed,
        detail,
    });
}

fn close<S: Scalar>(a: &S, b: &S) -> bool {
    let scale = [a.abs(), b.abs(), S::one()]
        .into_iter()
        .fold(S::zero(), |m, x| if x > m { x } else { m });
    (a.clone() - b.clone()).is_negligible(&scale)
}

pub fn verify<S: Scalar>(job: &Job, which: Which) -> Result<Rendered, CliError> {
    let k = job.k;
    // deep enough for a factorization interior and two levels of solve_h
    let depth = job.n_max.max(3 * k + 2);
    let setup = Setup::<S>::new(job, depth)?;
    let (table, qt) = setup.propagate(depth)?;
    let cx = Ctx {
        setup,
        depth,
        table,
        qt,
    };
    let mut checks = Vec::new();
    if job.constant {
        constant_rows(&cx, &mut checks);
    }
    if which.includes(Which::Theorem1) {
        theorem1(&cx, &mut checks);
    }
    if which.includes(Which::Geronimus) {
        geronimus(&cx, &mut checks);
    }
    if which.includes(Which::Kernels) {
        kernels(&cx, &mut checks);
    }
    if which.includes(Which::Matrices) {
        matrices(&cx, &mut checks);
    }
    if which.includes(Which::Periodicity) {
        periodicity(&cx, &mut checks, job.constant);
    }
    if which.includes(Which::Zeros) {
        zeros(&cx, &mut checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        family: job.kind_name(),
        mode: job.mode.name().into(),
        k,
        which,
        checks,
        passed,
    };
    let mut text = format!("family {}, k = {k}, mode {}\n", report.family, report.mode);
    for c in &report.checks {
        let _ = writeln!(
            text,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let _ = write!(
        text,
        "{} of {} checks passed",
        report.checks.len() - failed.len(),
        report.checks.len()
    );
    let failure = (!passed).then(|| CliError::Verification(failed.join(", ")));
    Ok(Rendered {
        json: serde_json::to_value(&report).map_err(|e| CliError::Input(e.to_string()))?,
        text,
        failure,
    })
}

/// The propagated rows stay equal to the initial row.
fn constant_rows<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let k = cx.setup.k;
    let row = &cx.setup.init[..k - 1];
    let first =
        (k - 1..=cx.depth + 1).find(|&n| (1..k).any(|i| !close(&cx.table.b(i, n), &row[i - 1])));
    let res = Ok(match first {
        None => (
            true,
            format!("b_i,n = b_i for n = {}..{}", k - 1, cx.depth + 1),
        ),
        Some(n) => (false, format!("row {n} departs from the initial row")),
    });
    record(out, "constant-rows", res);
}

fn theorem1<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let res = check_theorem1(&cx.setup.rc, &cx.table, &cx.qt, cx.depth)
        .map(|r| {
            let detail = match r.first_failure {
                None => format!(
                    "n <= {}: residuals {:e} {:e} {:e} {:e}",
                    r.n_max,
                    r.beta_tilde,
                    r.gamma_tilde,
                    r.ratio_identity,
                    r.coefficient_conditions
                ),
                Some(n) => format!("first failure at n = {n}"),
            };
            (r.holds, detail)
        })
        .map_err(CliError::from);
    record(out, "theorem1", res);
}

fn geronimus<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let k = cx.setup.k;
    let (rc, table, qt) = (&cx.setup.rc, &cx.table, &cx.qt);
    let one = S::one();
    let h = match solve_h(rc, table, qt, k, &one) {
        Ok(h) => h,
        Err(e) => {
            record(out, "geronimus.solve", Err(e.into()));
            return;
        }
    };
    let res = solve_h(rc, table, qt, k + 1, &one).map(|h2| {
        let same = h.h.iter().zip(&h2.h).all(|(a, b)| close(a, b));
        (same, "levels n = k and n = k+1 give the same h".to_string())
    });
    record(out, "geronimus.solve", res.map_err(CliError::from));
    let res = explicit_leading_coefficient(table, qt, &one, &one)
        .map(|lead| (close(&lead, h.leading()), format!("h_{} = {lead}", k - 1)));
    record(out, "geronimus.leading", res.map_err(CliError::from));
    let last = 2 * cx.depth - k;
    let res = (|| -> Result<(bool, String), CliError> {
        let v = moments_from_recurrence(&qt.rc_q, 2 * cx.depth + 1)?;
        let u = moments_from_recurrence(rc, 2 * cx.depth + 1)?;
        let hv = u_moments_from_v(&v, &h);
        let bad = (0..=last).find(|&n| !close(&hv[n], &u.moments()[n]));
        Ok(match bad {
            None => (true, format!("u_n = sum h_j v_(j+n) for n <= {last}")),
            Some(n) => (false, format!("u_{n} differs")),
        })
    })();
    record(out, "geronimus.moments", res);
    if k >= 2 {
        let res = h_ratio_check(rc, table, &h, cx.depth - 1).map(|r| {
            let detail = match r.first_violation {
                None => format!("{} levels, max residual {:e}", r.checked, r.max_residual),
                Some(n) => format!("fails at n = {n}"),
            };
            (r.holds, detail)
        });
        record(out, "geronimus.ratio", res.map_err(CliError::from));
    }
}

fn kernels<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let k = cx.setup.k;
    let one = S::one();
    let h = match solve_h(&cx.setup.rc, &cx.table, &cx.qt, k, &one) {
        Ok(h) => h,
        Err(e) => {
            record(out, "kernels", Err(e.into()));
            return;
        }
    };
    let pts: Vec<(S, S)> = POINTS
        .iter()
        .map(|&(a, b, c, d)| (S::from_ratio(a, b), S::from_ratio(c, d)))
        .collect();
    let last = cx.depth + 1 - k;
    let mut failed = None;
    let mut worst = 0f64;
    for n in k - 1..=last {
        match kernel_identity_check(&cx.setup.rc, &cx.table, &cx.qt, &h, &one, n, &pts) {
            Ok(r) => {
                worst = worst
                    .max(r.kernel_v)
                    .max(r.kernel_u_quotient)
                    .max(r.kernel_v_quotient)
                    .max(r.extended);
                if !r.holds && failed.is_none() {
                    failed = Some(format!("fails at n = {n}"));
                }
            }
            Err(e) => {
                failed.get_or_insert(format!("n = {n}: {e}"));
            }
        }
    }
    let res = Ok(match failed {
        None => (
            true,
            format!(
                "n = {}..{last} at {} points, max residual {worst:e}",
                k - 1,
                pts.len()
            ),
        ),
        Some(d) => (false, d),
    });
    record(out, "kernels", res);
}

fn matrices<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let k = cx.setup.k;
    let (rc, table, qt) = (&cx.setup.rc, &cx.table, &cx.qt);
    let sizes = cx.depth;
    let res = (|| -> Result<(bool, String), CliError> {
        for m in 1..=sizes {
            let jp = JacobiTruncation::from_recurrence(rc, m)?;
            let direct = JacobiTruncation::from_recurrence(&qt.rc_q, m)?;
            let sim =
                match build_jq_from_similarity(&jp, table) {
                    Ok(s) => s,
                    Err(e) if S::EXACT => return Ok((false, format!("m = {m}: {e}"))),
                    Err(e) => return Ok((
                        false,
                        format!(
                            "m = {m}: {e} (float rounding in A~ J A~^-1; rational mode is exact)"
                        ),
                    )),
                };
            let same = sim
                .diag()
                .iter()
                .zip(direct.diag())
                .chain(sim.sub().iter().zip(direct.sub()))
                .all(|(a, b)| close(a, b));
            if !same {
                return Ok((
                    false,
                    format!("m = {m}: similarity differs from the direct truncation"),
                ));
            }
            let r = intertwining_residual(&jp, &direct, table)?;
            if !r.is_negligible(&S::one()) {
                return Ok((false, format!("m = {m}: intertwining residual {r}")));
            }
        }
        Ok((true, format!("m = 1..{sizes}")))
    })();
    record(out, "matrices.similarity", res);
    let m = cx.depth + 2 - k;
    let one = S::one();
    let res = (|| -> Result<(bool, String), CliError> {
        let h = solve_h(rc, table, qt, k, &one)?;
        let conn = BandedConnection::new(rc, table, &h, m)?;
        let jp = JacobiTruncation::from_recurrence(rc, m)?;
        let jq = JacobiTruncation::from_recurrence(&qt.rc_q, m)?;
        let r = factorization_check(&jp, &jq, &conn, &h.monic())?;
        Ok((
            r.holds,
            format!(
                "m = {m}, residuals {:e} and {:e}",
                r.ul_residual, r.lu_residual
            ),
        ))
    })();
    record(out, "matrices.factorization", res);
    let pts: Vec<S> = POINTS
        .iter()
        .map(|&(a, b, _, _)| S::from_ratio(a, b))
        .collect();
    let n = cx.depth - 1;
    let res = truncation_identity_check(rc, table, qt, n, &pts).map(|r| {
        (
            r.holds,
            format!(
                "n = {n}, residuals {:e} {:e} {:e}",
                r.p_recurrence, r.q_recurrence, r.connection
            ),
        )
    });
    record(out, "matrices.truncation", res.map_err(CliError::from));
}

fn periodicity<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>, constant: bool) {
    let k = cx.setup.k;
    if !constant || k < 2 {
        record(
            out,
            "periodicity",
            Ok((
                true,
                "skipped: not a constant-coefficient configuration".into(),
            )),
        );
        return;
    }
    let row = cx.setup.init[..k - 1].to_vec();
    let res = (|| -> Result<(bool, String), CliError> {
        let rep = verify_constant_case(&cx.setup.rc, k, &row, cx.depth)?;
        let tail = match rep.witness {
            None => "the constant-case conditions hold".to_string(),
            Some((i, n)) => format!("condition i = {i} fails at n = {n}"),
        };
        if !cx.setup.rc.is_symmetric() {
            return Ok((rep.holds, tail));
        }
        let p = periodicity_analysis(k, &row)?;
        Ok((rep.holds, format!("period {p}; {tail}")))
    })();
    record(out, "periodicity", res);
}

/// Every float is a dyadic rational; Sturm sign counts are only reliable
/// when carried out on that exact value.
fn exact_image<S: Scalar>(
    rc: &RecurrenceCoefficients<S>,
    table: &ConnectionTable<S>,
) -> Result<(RecurrenceCoefficients<Rational>, ConnectionTable<Rational>), CliError> {
    let conv = |xs: &[S]| -> Result<Vec<Rational>, CliError> {
        xs.iter()
            .map(|x| {
                Rational::from_float(x.as_f64())
                    .ok_or_else(|| CliError::Input(format!("non-finite value {x}")))
            })
            .collect()
    };
    let rows = table
        .rows()
        .iter()
        .map(|r| conv(r))
        .collect::<Result<_, _>>()?;
    Ok((
        RecurrenceCoefficients::new(conv(rc.betas())?, conv(rc.gammas())?)?,
        ConnectionTable::from_rows(table.k(), rows)?,
    ))
}

fn zeros<S: Scalar>(cx: &Ctx<S>, out: &mut Vec<Check>) {
    let k = cx.setup.k;
    let res = (|| -> Result<(bool, String), CliError> {
        let image = if S::EXACT {
            None
        } else {
            Some(exact_image(&cx.setup.rc, &cx.table)?)
        };
        let mut bounded = 0;
        for n in 1..=cx.depth {
            let r = match &image {
                None => descartes_bound(&cx.setup.rc, &cx.table, n)?,
                Some((rc, table)) => descartes_bound(rc, table, n)?,
            };
            if !r.verdict {
                return Ok((
                    false,
                    format!("n = {n}: {} zeros beyond the bound {}", r.actual, r.bound),
                ));
            }
            bounded += 1;
        }
        Ok((
            true,
            format!("{bounded} degrees within the sign-change bound"),
        ))
    })();
    record(out, "zeros.descartes", res);
    if !cx
        .qt
        .rc_q
        .truncate(cx.depth)
        .map(|r| r.is_positive_definite())
        .unwrap_or(false)
    {
        record(
            out,
            "zeros.rules",
            Ok((true, "skipped: recurrence is not positive definite".into())),
        );
        return;
    }
    let support = default_support(&cx.setup.spec);
    let top = cx.depth.min(12);
    let res = (|| -> Result<(bool, String), CliError> {
        let v: Vec<f64> = moments_from_recurrence(&cx.qt.rc_q, 2 * top)?
            .moments()
            .iter()
            .map(Scalar::as_f64)
            .collect();
        let mut outside = 0;
        for m in 1..=top {
            let rule = build_rule(&cx.qt, &S::one(), m)?;
            let rep = exactness_report(&rule, &v, EXACTNESS_TOL)?;
            if !rep.holds {
                return Ok((
                    false,
                    format!("m = {m}: moment error {:e}", rep.max_residual),
                ));
            }
            if let Some(s) = support {
                outside = outside.max(zeros_outside_support(&rule, s, k)?.len());
            }
        }
        let hull = if support.is_some() {
            format!(
                ", at most {outside} nodes outside the support (k-1 = {})",
                k - 1
            )
        } else {
            String::new()
        };
        Ok((
            true,
            format!("m = 1..{top} exact through degree 2m-1{hull}"),
        ))
    })();
    record(out, "zeros.rules", res);
}
