//! Job settings from a flat TOML file, overridden by command-line flags and,
//! for the arithmetic mode, by `QUASIQUAD_MODE`.

use std::path::Path;

use clap::{Args, ValueEnum};
use quasiquad::{FamilySpec, Scalar};
use serde::Deserialize;

use crate::CliError;

pub const MODE_ENV: &str = "QUASIQUAD_MODE";
const DEFAULT_N_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    ChebyshevU,
    ChebyshevV,
    ChebyshevW,
    Laguerre,
    TwoPeriodic,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

/// Flags shared by every subcommand. Each one mirrors a config file key.
#[derive(Debug, Clone, Default, Args)]
pub struct JobArgs {
    /// Flat TOML file with the same keys as the flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,
    /// Base orthogonal family.
    #[arg(long, global = true, value_enum)]
    pub kind: Option<Kind>,
    /// Laguerre parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Two-periodic gamma at even indices.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Two-periodic gamma at odd indices.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Custom family: beta_0, beta_1, ... comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Custom family: gamma_1, gamma_2, ... comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Number of terms in the connection, Q_n = P_n + ... + b_{k-1,n} P_{n-k+1}.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// b_{1..k-1,k-1} then b_{1..k-1,k}, comma separated ("p/q", integers or decimals).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub init: Option<String>,
    /// Highest index computed.
    #[arg(long = "n-max", visible_alias = "n", global = true)]
    pub n_max: Option<usize>,
    /// Rule size.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// <v, 1>.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// Demand b_{i,n} = b_i for every n >= k-1; --init may then hold one row.
    #[arg(long, global = true)]
    pub constant: bool,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Text {
    Str(String),
    Int(i64),
    Float(f64),
}

impl Text {
    fn into_string(self) -> String {
        match self {
            Text::Str(s) => s,
            Text::Int(i) => i.to_string(),
            Text::Float(f) => f.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum List {
    Joined(String),
    Items(Vec<Text>),
}

impl List {
    fn into_strings(self) -> Vec<String> {
        match self {
            List::Joined(s) => split_list(&s),
            List::Items(v) => v.into_iter().map(Text::into_string).collect(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    kind: Option<String>,
    alpha: Option<Text>,
    a: Option<Text>,
    b: Option<Text>,
    beta: Option<List>,
    gamma: Option<List>,
    k: Option<usize>,
    init: Option<List>,
    #[serde(alias = "n_max")]
    n_max: Option<usize>,
    m: Option<usize>,
    v0: Option<Text>,
    constant: Option<bool>,
    mode: Option<String>,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// Settings after merging file, flags and environment; scalars are still text.
#[derive(Debug, Clone)]
pub struct Job {
    pub kind: Kind,
    pub alpha: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub beta: Vec<String>,
    pub gamma: Vec<String>,
    pub k: usize,
    pub init: Vec<String>,
    pub n_max: usize,
    pub m: Option<usize>,
    pub v0: String,
    pub constant: bool,
    pub mode: Mode,
}

fn parse_enum<T: ValueEnum>(what: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| CliError::Input(format!("unknown {what} `{s}`")))
}

impl Job {
    pub fn resolve(args: &JobArgs, env_mode: Option<String>) -> Result<Job, CliError> {
        let file = match &args.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let kind = match (args.kind, file.kind) {
            (Some(k), _) => k,
            (None, Some(s)) => parse_enum("family kind", &s)?,
            (None, None) => return Err(CliError::Input("no family given (--kind)".into())),
        };
        let mut mode = match (args.mode, file.mode) {
            (Some(m), _) => m,
            (None, Some(s)) => parse_enum("mode", &s)?,
            (None, None) => Mode::Rational,
        };
        if let Some(s) = env_mode.filter(|s| !s.is_empty()) {
            mode = parse_enum(MODE_ENV, &s)?;
        }
        let text = |flag: &Option<String>, key: Option<Text>| {
            flag.clone().or_else(|| key.map(Text::into_string))
        };
        let list = |flag: &Option<String>, key: Option<List>| match flag {
            Some(s) => split_list(s),
            None => key.map(List::into_strings).unwrap_or_default(),
        };
        let k = args.k.or(file.k).unwrap_or(1);
        if k == 0 {
            return Err(CliError::Input("k must be at least 1".into()));
        }
        let n_max = args.n_max.or(file.n_max).unwrap_or(DEFAULT_N_MAX);
        let constant = args.constant || file.constant.unwrap_or(false);
        let mut init = list(&args.init, file.init);
        if constant && k >= 2 && init.len() == k - 1 {
            init.extend_from_within(..);
        }
        if init.len() != 2 * (k - 1) {
            return Err(CliError::Input(format!(
                "k = {k} needs {} initial coefficients, got {}",
                2 * (k - 1),
                init.len()
            )));
        }
        if n_max < k + 1 {
            return Err(CliError::Input(format!(
                "n-max must be at least k + 1 = {}",
                k + 1
            )));
        }
        Ok(Job {
            kind,
            alpha: text(&args.alpha, file.alpha),
            a: text(&args.a, file.a),
            b: text(&args.b, file.b),
            beta: list(&args.beta, file.beta),
            gamma: list(&args.gamma, file.gamma),
            k,
            init,
            n_max,
            m: args.m.or(file.m),
            v0: text(&args.v0, file.v0).unwrap_or_else(|| "1".into()),
            constant,
            mode,
        })
    }

    pub fn spec<S: Scalar>(&self) -> Result<FamilySpec<S>, CliError> {
        let need = |name: &str, v: &Option<String>| -> Result<S, CliError> {
            let s = v
                .as_deref()
                .ok_or_else(|| CliError::Input(format!("family needs --{name}")))?;
            Ok(S::parse_scalar(s)?)
        };
        let spec = match self.kind {
            Kind::ChebyshevU => FamilySpec::ChebyshevU,
            Kind::ChebyshevV => FamilySpec::ChebyshevV,
            Kind::ChebyshevW => FamilySpec::ChebyshevW,
            Kind::Laguerre => FamilySpec::Laguerre {
                alpha: need("alpha", &self.alpha)?,
            },
            Kind::TwoPeriodic => FamilySpec::TwoPeriodic {
                a: need("a", &self.a)?,
                b: need("b", &self.b)?,
            },
            Kind::Custom => FamilySpec::Custom {
                beta: parse_all(&self.beta)?,
                gamma: parse_all(&self.gamma)?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn init<S: Scalar>(&self) -> Result<Vec<S>, CliError> {
        parse_all(&self.init)
    }

    pub fn v0<S: Scalar>(&self) -> Result<S, CliError> {
        Ok(S::parse_scalar(&self.v0)?)
    }

    pub fn kind_name(&self) -> String {
        self.kind
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn parse_all<S: Scalar>(xs: &[String]) -> Result<Vec<S>, CliError> {
    xs.iter()
        .map(|s| S::parse_scalar(s).map_err(CliError::from))
        .collect()
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
