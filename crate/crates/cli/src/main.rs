//! `quasiquad`: quasi-orthogonal families, their Geronimus pairs and the
//! quadrature rules they generate, from the command line.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 quasi-orthogonality violated,
//! 4 not positive definite, 5 a verification or internal check failed.

mod config;
mod run;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quasiquad::{Error, Rational, Scalar};

use config::{Job, JobArgs, Mode, MODE_ENV};
use run::Rendered;
use verify::Which;

#[derive(Debug, Parser)]
#[command(
    name = "quasiquad",
    version,
    about = "Quasi-orthogonal polynomials and positive quadrature rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    job: JobArgs,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit an aligned text table (the default).
    #[arg(long, global = true)]
    table: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recurrence coefficients and moments of a base family.
    Family,
    /// Connection table and recurrence of Q from the initial rows.
    Propagate,
    /// The polynomial h with u = h v, and the moments of v.
    Geronimus,
    /// Gaussian rule of size m for v.
    Quadrature,
    /// Run the identity checks and report pass/fail for each.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Lib(Error),
    Violation { n: usize, detail: String },
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Violation { .. } => 3,
            CliError::Verification(_) => 5,
            CliError::Lib(e) => match e {
                Error::InvalidParameter(_)
                | Error::InvalidInit { .. }
                | Error::Parse(_)
                | Error::IndexOutOfRange { .. }
                | Error::NotRegular { .. }
                | Error::DegenerateRemainder { .. } => 2,
                Error::QuasiOrthogonalityViolated { .. } => 3,
                Error::NotPositiveDefinite { .. } => 4,
                _ => 5,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Lib(Error::QuasiOrthogonalityViolated { n }) => {
                write!(
                    f,
                    "quasi-orthogonality violated at n = {n}: b_(k-1),{n} vanishes"
                )
            }
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Violation { n, detail } => {
                write!(f, "quasi-orthogonality violated at n = {n}: {detail}")
            }
            CliError::Verification(names) => write!(f, "verification failed: {names}"),
        }
    }
}

fn dispatch<S: Scalar>(command: &Command, job: &Job) -> Result<Rendered, CliError> {
    match command {
        Command::Family => run::family::<S>(job),
        Command::Propagate => run::propagate::<S>(job),
        Command::Geronimus => run::geronimus::<S>(job),
        Command::Quadrature => run::quadrature::<S>(job),
        Command::Verify { which } => verify::verify::<S>(job, *which),
    }
}

fn emit(cli: &Cli, r: &Rendered) -> Result<(), CliError> {
    let mut body = if cli.json {
        serde_json::to_string_pretty(&r.json).map_err(|e| CliError::Input(e.to_string()))?
    } else {
        r.text.clone()
    };
    body.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().write_all(body.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Job::resolve(&cli.job, std::env::var(MODE_ENV).ok()).and_then(|job| {
        let r = match job.mode {
            Mode::Rational => dispatch::<Rational>(&cli.command, &job)?,
            Mode::Float => dispatch::<f64>(&cli.command, &job)?,
        };
        emit(&cli, &r)?;
        r.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
