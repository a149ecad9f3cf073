//! Command line and config file.
//!
//! The config file holds `key = value` lines with the flag names as keys
//! (`A`, `lambda`, `rho0`, `Atilde`, `schedule`, `grid`, `jet-order`, `tol`,
//! `seed`, `out`, `format`); `#` starts a comment. Flags override the file.
//! Lists are comma separated.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    /// p-mass of the model end
    Mass,
    /// flux of rho^-2 through a gauge sphere
    Flux,
    /// boundary identities, covariance and torsion checks
    Identities,
    /// Szego decay, spurious solutions and the Box_b zbar fit
    Kohn,
    /// residual of the bubble equation
    Bubble,
    /// deficit scan of the glued test function
    Quotient,
    /// mass variation and the sphere second variation
    Variation,
    /// residual suites on the example structures
    Examples,
    /// every acceptance criterion
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Mass => "mass",
            Command::Flux => "flux",
            Command::Identities => "identities",
            Command::Kohn => "kohn",
            Command::Bubble => "bubble",
            Command::Quotient => "quotient",
            Command::Variation => "variation",
            Command::Examples => "examples",
            Command::Suite => "suite",
        }
    }

    /// Parameter keys the command accepts besides `out` and `format`.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Mass => &["A", "schedule", "grid", "tol"],
            Command::Flux => &["rho0", "grid", "tol"],
            Command::Identities => &["A", "seed", "tol"],
            Command::Kohn => &["A", "schedule", "seed", "tol"],
            Command::Bubble => &["lambda", "seed", "tol"],
            Command::Quotient => &["Atilde", "lambda", "rho0", "tol"],
            Command::Variation => &["grid", "seed", "tol"],
            Command::Examples => &["seed", "jet-order", "tol"],
            Command::Suite => &[],
        }
    }

    /// Commands that draw random samples and therefore need a seed.
    pub fn needs_seed(self) -> bool {
        matches!(self, Command::Identities | Command::Kohn | Command::Bubble | Command::Variation | Command::Examples)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub const KEYS: [&str; 11] = ["A", "lambda", "rho0", "Atilde", "schedule", "grid", "jet-order", "tol", "seed", "out", "format"];

#[derive(Parser, Debug)]
#[command(name = "phmass", version, about = "Checks and computations for pseudohermitian mass and the Tanaka-Webster quotient")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// mass parameter of the model end
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<String>,
    /// bubble concentration(s), comma separated
    #[arg(long)]
    lambda: Option<String>,
    /// gauge radius (flux sphere, gluing radius)
    #[arg(long)]
    rho0: Option<String>,
    /// mass term of the Green function in the glued test function
    #[arg(long = "Atilde", allow_hyphen_values = true)]
    a_tilde: Option<String>,
    /// increasing radii, comma separated
    #[arg(long)]
    schedule: Option<String>,
    /// quadrature grid: n_phi,n_alpha (surface) or n_rho,n_alpha,n_phi (shells)
    #[arg(long)]
    grid: Option<String>,
    /// jet order of the local expansions (4 to 8)
    #[arg(long = "jet-order")]
    jet_order: Option<String>,
    /// override of every check tolerance
    #[arg(long)]
    tol: Option<String>,
    /// seed for sampled points and Monte Carlo
    #[arg(long)]
    seed: Option<String>,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// key = value file with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Why a command line was not run.
#[derive(Debug, PartialEq)]
pub enum ArgError {
    /// `--help` or `--version`: print and exit 0.
    Info(String),
    Bad(String),
}

impl fmt::Display for ArgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgError::Info(s) | ArgError::Bad(s) => f.write_str(s),
        }
    }
}

fn bad(msg: impl Into<String>) -> ArgError {
    ArgError::Bad(msg.into())
}

/// Parameters as given; `None` means the command default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub a: Option<f64>,
    pub lambda: Option<Vec<f64>>,
    pub rho0: Option<f64>,
    pub a_tilde: Option<f64>,
    pub schedule: Option<Vec<f64>>,
    pub grid: Option<Vec<usize>>,
    pub jet_order: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// `key = value` lines; unknown or repeated keys are rejected.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ArgError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("config line {}: expected key = value", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(bad(format!("config line {}: unknown key '{k}'", n + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(bad(format!("config line {}: '{k}' given twice", n + 1)));
        }
    }
    Ok(map)
}

fn float(key: &str, v: &str) -> Result<f64, ArgError> {
    let x: f64 = v.trim().parse().map_err(|_| bad(format!("--{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(bad(format!("--{key}: '{v}' is not finite")));
    }
    Ok(x)
}

fn positive(key: &str, v: &str) -> Result<f64, ArgError> {
    let x = float(key, v)?;
    if x <= 0.0 {
        return Err(bad(format!("--{key}: must be positive, got {x}")));
    }
    Ok(x)
}

fn list<T>(key: &str, v: &str, item: impl Fn(&str, &str) -> Result<T, ArgError>) -> Result<Vec<T>, ArgError> {
    let items: Vec<T> = v.split(',').map(|s| item(key, s)).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(bad(format!("--{key}: empty list")));
    }
    Ok(items)
}

fn count(key: &str, v: &str) -> Result<usize, ArgError> {
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(bad(format!("--{key}: '{v}' is not a positive integer"))),
    }
}

impl RunConfig {
    /// Parses `argv` (program name first), reading `--config` if given.
    pub fn from_args<I, T>(argv: I) -> Result<RunConfig, ArgError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ArgError::Info(e.to_string()),
            _ => ArgError::Bad(e.to_string()),
        })?;
        let mut raw = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| bad(format!("--config {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("A", &args.a),
            ("lambda", &args.lambda),
            ("rho0", &args.rho0),
            ("Atilde", &args.a_tilde),
            ("schedule", &args.schedule),
            ("grid", &args.grid),
            ("jet-order", &args.jet_order),
            ("tol", &args.tol),
            ("seed", &args.seed),
            ("out", &args.out),
            ("format", &args.format),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                raw.insert(k.to_string(), v.clone());
            }
        }
        RunConfig::from_map(args.command, &raw)
    }

    /// Builds and validates a configuration from raw key/value pairs.
    pub fn from_map(command: Command, raw: &BTreeMap<String, String>) -> Result<RunConfig, ArgError> {
        let mut params = Params::default();
        let (mut out, mut format) = (None, Format::Json);
        for (k, v) in raw {
            let key = k.as_str();
            if key != "out" && key != "format" && !command.keys().contains(&key) {
                if !KEYS.contains(&key) {
                    return Err(bad(format!("unknown key '{key}'")));
                }
                let accepted = if command.keys().is_empty() { "none".to_string() } else { command.keys().join(", ") };
                return Err(bad(format!("'{key}' does not apply to {}; it takes: {accepted}", command.name())));
            }
            match key {
                "A" => params.a = Some(float(key, v)?),
                "lambda" => params.lambda = Some(list(key, v, positive)?),
                "rho0" => params.rho0 = Some(positive(key, v)?),
                "Atilde" => {
                    let x = float(key, v)?;
                    if x < 0.0 {
                        return Err(bad(format!("--Atilde: must be non-negative, got {x}")));
                    }
                    params.a_tilde = Some(x);
                }
                "schedule" => {
                    let s = list(key, v, positive)?;
                    if s.len() < 2 || s.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(bad("--schedule: need at least two strictly increasing radii"));
                    }
                    params.schedule = Some(s);
                }
                "grid" => params.grid = Some(list(key, v, count)?),
                "jet-order" => {
                    let k = count(key, v)?;
                    if !(ph_calculus::MIN_RESIDUAL_ORDER..=8).contains(&k) {
                        return Err(bad(format!("--jet-order: must be in {}..=8, got {k}", ph_calculus::MIN_RESIDUAL_ORDER)));
                    }
                    params.jet_order = Some(k);
                }
                "tol" => params.tol = Some(positive(key, v)?),
                "seed" => params.seed = Some(v.trim().parse().map_err(|_| bad(format!("--seed: '{v}' is not a u64")))?),
                "out" => out = Some(PathBuf::from(v)),
                "format" => {
                    format = Format::from_str(v, true).map_err(|_| bad(format!("--format: '{v}' is not json or csv")))?;
                }
                _ => unreachable!("keys are checked above"),
            }
        }
        let cfg = RunConfig { command, params, out, format };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ArgError> {
        let p = &self.params;
        if self.command.needs_seed() && p.seed.is_none() {
            return Err(bad(format!("{} samples randomly and needs --seed", self.command.name())));
        }
        if let Some(g) = &p.grid {
            let want = if self.command == Command::Variation { 3 } else { 2 };
            if g.len() != want {
                return Err(bad(format!("--grid: {} takes {want} node counts, got {}", self.command.name(), g.len())));
            }
        }
        if matches!(self.command, Command::Identities | Command::Kohn) && p.a == Some(0.0) {
            return Err(bad(format!("{}: the checks are relative to A and need A != 0", self.command.name())));
        }
        if self.command == Command::Quotient {
            let rho0 = p.rho0.unwrap_or(1.0);
            for &lambda in p.lambda.as_deref().unwrap_or(&[]) {
                yamabe_quotient::QuotientConfig::new(lambda, rho0, 0.0)
                    .validate_scan()
                    .map_err(|e| bad(format!("--lambda {lambda} with --rho0 {rho0}: {e}")))?;
            }
        }
        Ok(())
    }
}
