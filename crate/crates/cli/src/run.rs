//! The subcommands, generic over the scalar type.

use std::fmt::Write as _;

use quasiquad::functionals::{family_recurrence, moments_from_recurrence};
use quasiquad::geronimus::{
    explicit_leading_coefficient, h_ratio_check, solve_h, GeronimusPoly, RatioReport,
};
use quasiquad::jacobi::QuadratureRule;
use quasiquad::quadrature::{
    build_rule, default_support, exactness_report, zeros_outside_support, ExactnessReport,
};
use quasiquad::quasi::{
    check_theorem1, forward_propagate, verify_constant_case, ConnectionTable, QTilde,
    Theorem1Report,
};
use quasiquad::scalar::serde_scalar;
use quasiquad::{Error, FamilySpec, MomentFunctional, RecurrenceCoefficients, Scalar};
use serde::Serialize;

use crate::config::Job;
use crate::CliError;

/// Relative moment error accepted by the exactness report of `quadrature`.
pub const EXACTNESS_TOL: f64 = 1e-10;

pub struct Rendered {
    pub json: serde_json::Value,
    pub text: String,
    /// Set when the command ran but its verdict is a failure.
    pub failure: Option<CliError>,
}

impl Rendered {
    fn ok(out: &impl Serialize, text: String) -> Result<Rendered, CliError> {
        Ok(Rendered {
            json: serde_json::to_value(out).map_err(|e| CliError::Input(e.to_string()))?,
            text,
            failure: None,
        })
    }
}

/// Family, recurrence and initial data shared by the table-based commands.
pub struct Setup<S: Scalar> {
    pub spec: FamilySpec<S>,
    pub rc: RecurrenceCoefficients<S>,
    pub k: usize,
    pub init: Vec<S>,
    pub v0: S,
}

impl<S: Scalar> Setup<S> {
    /// `rc` reaches `depth + 2k + 4`, enough for every check run at `depth`.
    pub fn new(job: &Job, depth: usize) -> Result<Self, CliError> {
        let spec = job.spec::<S>()?;
        let rc = family_recurrence(&spec, depth + 2 * job.k + 4)?;
        Ok(Setup {
            spec,
            rc,
            k: job.k,
            init: job.init()?,
            v0: job.v0()?,
        })
    }

    pub fn propagate(&self, n_max: usize) -> Result<(ConnectionTable<S>, QTilde<S>), CliError> {
        Ok(forward_propagate(&self.rc, self.k, &self.init, n_max)?)
    }

    /// Moments of `v` with `<v, 1> = v0`.
    pub fn v_moments(&self, qt: &QTilde<S>, count: usize) -> Result<MomentFunctional<S>, CliError> {
        let unit = moments_from_recurrence(&qt.rc_q, count)?;
        Ok(MomentFunctional::new(
            unit.moments()
                .iter()
                .map(|m| m.clone() * self.v0.clone())
                .collect(),
        )?)
    }
}

fn header(job: &Job) -> String {
    format!(
        "family {}, k = {}, mode {}\n",
        job.kind_name(),
        job.k,
        job.mode.name()
    )
}

#[derive(Serialize)]
#[serde(bound = "")]
struct FamilyOut<S: Scalar> {
    family: String,
    mode: &'static str,
    n_max: usize,
    recurrence: RecurrenceCoefficients<S>,
    /// `u_0..u_{2 n_max}` with `u_0 = 1`.
    moments: MomentFunctional<S>,
}

pub fn family<S: Scalar>(job: &Job) -> Result<Rendered, CliError> {
    let n = job.n_max;
    let rc = family_recurrence(&job.spec::<S>()?, n)?;
    let moments = moments_from_recurrence(&rc, 2 * n)?;
    let mut text = format!("family {}, mode {}\n", job.kind_name(), job.mode.name());
    let _ = writeln!(
        text,
        "{:>4}  {:>24}  {:>24}  {:>24}",
        "n", "beta_n", "gamma_n", "u_n"
    );
    for i in 0..=n {
        let g = if i == 0 {
            "-".to_string()
        } else {
            rc.gamma(i).to_string()
        };
        let _ = writeln!(
            text,
            "{:>4}  {:>24}  {:>24}  {:>24}",
            i,
            rc.beta(i).to_string(),
            g,
            moments.moments()[i].to_string()
        );
    }
    let out = FamilyOut {
        family: job.kind_name(),
        mode: job.mode.name(),
        n_max: n,
        recurrence: rc,
        moments,
    };
    Rendered::ok(&out, text)
}

#[derive(Serialize)]
#[serde(bound = "")]
struct PropagateOut<S: Scalar> {
    family: String,
    mode: &'static str,
    k: usize,
    n_max: usize,
    table: ConnectionTable<S>,
    qtilde: QTilde<S>,
    theorem1: Theorem1Report,
}

/// Fails with the first `(i, n)` at which constant rows are impossible.
fn check_constant<S: Scalar>(setup: &Setup<S>, n_max: usize) -> Result<(), CliError> {
    let k = setup.k;
    if k < 2 {
        return Ok(());
    }
    if setup.init[..k - 1] != setup.init[k - 1..] {
        return Err(CliError::Input(
            "--constant needs identical rows k-1 and k".into(),
        ));
    }
    let rep = verify_constant_case(&setup.rc, k, &setup.init[..k - 1], n_max)?;
    match rep.witness {
        Some((i, n)) => Err(CliError::Violation {
            n,
            detail: format!("constant b_{i} is inconsistent at n = {n}"),
        }),
        None => Ok(()),
    }
}

pub fn propagate<S: Scalar>(job: &Job) -> Result<Rendered, CliError> {
    let n = job.n_max;
    let setup = Setup::<S>::new(job, n)?;
    if job.constant {
        check_constant(&setup, n)?;
    }
    let (table, qt) = setup.propagate(n)?;
    let t1 = check_theorem1(&setup.rc, &table, &qt, n)?;
    let k = setup.k;
    let mut text = header(job);
    let _ = write!(text, "{:>4}", "n");
    for i in 1..k {
        let _ = write!(text, "  {:>20}", format!("b_{i},n"));
    }
    let _ = writeln!(text, "  {:>20}  {:>20}", "beta~_n", "gamma~_n");
    for row in 0..=n {
        let _ = write!(text, "{row:>4}");
        for i in 1..k {
            let _ = write!(text, "  {:>20}", table.b(i, row).to_string());
        }
        let g = if row == 0 {
            "-".to_string()
        } else {
            qt.rc_q.gamma(row).to_string()
        };
        let _ = writeln!(text, "  {:>20}  {:>20}", qt.rc_q.beta(row).to_string(), g);
    }
    let _ = write!(
        text,
        "residuals: beta~ {:e}, gamma~ {:e}, ratio {:e}, coefficients {:e}; conditions {}",
        t1.beta_tilde,
        t1.gamma_tilde,
        t1.ratio_identity,
        t1.coefficient_conditions,
        if t1.holds { "hold" } else { "fail" }
    );
    let out = PropagateOut {
        family: job.kind_name(),
        mode: job.mode.name(),
        k,
        n_max: n,
        table,
        qtilde: qt,
        theorem1: t1,
    };
    Rendered::ok(&out, text)
}

#[derive(Serialize)]
#[serde(bound = "")]
struct GeronimusOut<S: Scalar> {
    family: String,
    mode: &'static str,
    k: usize,
    #[serde(with = "serde_scalar")]
    v0: S,
    /// Solved at level `n = k`.
    h: GeronimusPoly<S>,
    /// The level `n = k+1` solve gives the same `h`.
    consistent: bool,
    /// `h_{k-1}` from the closed form.
    #[serde(with = "serde_scalar")]
    leading_closed_form: S,
    ratio: Option<RatioReport>,
    /// `v_0..v_{2 n_max}`.
    v_moments: MomentFunctional<S>,
}

pub fn geronimus<S: Scalar>(job: &Job) -> Result<Rendered, CliError> {
    let k = job.k;
    let n = job.n_max.max(2 * k);
    let setup = Setup::<S>::new(job, n)?;
    let (table, qt) = setup.propagate(n)?;
    let h = solve_h(&setup.rc, &table, &qt, k, &setup.v0)?;
    let h_next = solve_h(&setup.rc, &table, &qt, k + 1, &setup.v0)?;
    let consistent = h.h.iter().zip(&h_next.h).all(|(a, b)| {
        let scale = if a.abs() > S::one() {
            a.abs()
        } else {
            S::one()
        };
        (a.clone() - b.clone()).is_negligible(&scale)
    });
    let lead = explicit_leading_coefficient(&table, &qt, &S::one(), &setup.v0)?;
    let ratio = if k >= 2 {
        Some(h_ratio_check(&setup.rc, &table, &h, n - 1)?)
    } else {
        None
    };
    let v = setup.v_moments(&qt, 2 * job.n_max)?;
    let mut text = header(job);
    for (j, c) in h.h.iter().enumerate() {
        let _ = writeln!(text, "h_{j} = {c}");
    }
    let _ = writeln!(text, "h_{} from the closed form = {lead}", k - 1);
    let _ = writeln!(text, "levels k and k+1 agree: {consistent}");
    if let Some(r) = &ratio {
        let _ = writeln!(
            text,
            "ratio h_(k-2)/h_(k-1): {} levels, holds {}",
            r.checked, r.holds
        );
    }
    for (j, m) in v.moments().iter().enumerate() {
        let _ = writeln!(text, "v_{j} = {m}");
    }
    text.pop();
    let out = GeronimusOut {
        family: job.kind_name(),
        mode: job.mode.name(),
        k,
        v0: setup.v0.clone(),
        h,
        consistent,
        leading_closed_form: lead,
        ratio,
        v_moments: v,
    };
    Rendered::ok(&out, text)
}

#[derive(Serialize)]
struct QuadratureOut {
    family: String,
    mode: &'static str,
    k: usize,
    rule: QuadratureRule,
    exactness: ExactnessReport,
    /// Nodes beyond the hull of the support of `u`, when that hull is known.
    outside_support: Option<Vec<f64>>,
}

pub fn quadrature<S: Scalar>(job: &Job) -> Result<Rendered, CliError> {
    let m = job
        .m
        .ok_or_else(|| CliError::Input("quadrature needs --m".into()))?;
    if m == 0 {
        return Err(CliError::Input("rule size must be positive".into()));
    }
    let n = job.n_max.max(m);
    let setup = Setup::<S>::new(job, n)?;
    let (_, qt) = setup.propagate(n)?;
    let rule = build_rule(&qt, &setup.v0, m)?;
    let v: Vec<f64> = setup
        .v_moments(&qt, 2 * m)?
        .moments()
        .iter()
        .map(Scalar::as_f64)
        .collect();
    let exactness = exactness_report(&rule, &v, EXACTNESS_TOL)?;
    let outside = match default_support(&setup.spec) {
        Some(s) => Some(zeros_outside_support(&rule, s, setup.k)?),
        None => None,
    };
    let mut text = header(job);
    let _ = writeln!(text, "{rule}");
    let _ = write!(
        text,
        "max relative moment error through degree {}: {:e} ({})",
        rule.exactness_degree,
        exactness.max_residual,
        if exactness.holds {
            "exact"
        } else {
            "NOT exact"
        }
    );
    if let Some(e) = exactness.first_inexact {
        let _ = write!(text, "\nat degree {}: {e:e}", rule.exactness_degree + 1);
    }
    if let Some(o) = &outside {
        let _ = write!(text, "\nnodes outside the support: {}", o.len());
    }
    let out = QuadratureOut {
        family: job.kind_name(),
        mode: job.mode.name(),
        k: setup.k,
        rule,
        exactness,
        outside_support: outside,
    };
    Rendered::ok(&out, text)
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}
