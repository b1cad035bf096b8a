//! Command-line flags, the `key = value` config file, and their merge into a
//! [`RunConfig`]. Flags win over file values, file values over defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use es_riemann::dissipation::{DissipationKind, DissipationSpec};

use crate::cases::{find_case, CaseDefinition};
use crate::error::CliError;

pub const DEFAULT_CASE: &str = "torrilhon";
pub const DEFAULT_FLUX: DissipationKind = DissipationKind::HllxOmega;
pub const DEFAULT_OMEGA: f64 = 0.925;
pub const DEFAULT_CELLS: usize = 300;
pub const DEFAULT_CFL: f64 = 0.5;
pub const DEFAULT_OUT: &str = "solution.csv";
pub const DEFAULT_REFERENCE_CELLS: usize = 12000;
pub const CURVE_OMEGA: f64 = 0.4;
pub const CURVE_SAMPLES: usize = 201;

const FILE_KEYS: [&str; 9] = [
    "case", "flux", "omega", "cells", "cfl", "tend", "audit", "out", "audit-out",
];

#[derive(Debug, Parser)]
#[command(name = "es-riemann", version, about = "Entropy-stable HLL-type finite-volume solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one case with one scheme and write the final solution.
    Solve(RunArgs),
    /// Write a fine-grid LLF (or exact, for Burgers) reference solution.
    Reference(ReferenceArgs),
    /// Run several schemes on one case and measure them against a reference.
    Compare(CompareArgs),
    /// Write the scalar dissipation functions d(λ) of every operator.
    Curves(CurvesArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// `key = value` file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub case: Option<String>,
    /// lf, llf, hll, lw, hll-omega, hllx-omega or roe.
    #[arg(long)]
    pub flux: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Final time; defaults to the case's.
    #[arg(long, allow_negative_numbers = true)]
    pub tend: Option<f64>,
    /// Certify the entropy inequality every step and fail on a violation.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-step audit CSV.
    #[arg(long)]
    pub audit_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReferenceArgs {
    #[arg(long, default_value = DEFAULT_CASE)]
    pub case: String,
    #[arg(long, default_value_t = DEFAULT_REFERENCE_CELLS)]
    pub cells: usize,
    #[arg(long, default_value_t = DEFAULT_CFL)]
    pub cfl: f64,
    #[arg(long)]
    pub tend: Option<f64>,
    #[arg(long, default_value = "reference.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, default_value = DEFAULT_CASE)]
    pub case: String,
    #[arg(long, default_value_t = DEFAULT_CELLS)]
    pub cells: usize,
    #[arg(long, default_value_t = DEFAULT_CFL)]
    pub cfl: f64,
    #[arg(long)]
    pub tend: Option<f64>,
    /// `kind` or `kind:omega`, repeatable. Defaults to ES-LLF and
    /// ES-HLLXω(0.925) for MHD, ES-Roe and ES-HLLXω(0.925) for Burgers.
    #[arg(long = "scheme")]
    pub schemes: Vec<String>,
    /// Reference CSV; required for MHD cases, Burgers cases use the exact
    /// solution.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value = "comparison.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CurvesArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub lambda_l: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda_r: f64,
    #[arg(long, default_value_t = CURVE_OMEGA)]
    pub omega: f64,
    /// Δt/Δx used by the LF and LW parts.
    #[arg(long, default_value_t = 1.0)]
    pub dt_over_dx: f64,
    #[arg(long, default_value_t = CURVE_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value = "curves.csv")]
    pub out: PathBuf,
}

/// A fully resolved single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseDefinition,
    pub spec: DissipationSpec,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub audit: bool,
    pub out: PathBuf,
    pub audit_out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "es-riemann solve")]
struct RunOnly {
    #[command(flatten)]
    args: RunArgs,
}

/// Parses `solve` flags (without the program name) and resolves them.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("es-riemann solve"))
        .chain(args.into_iter().map(Into::into));
    let parsed = RunOnly::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    RunConfig::resolve(&parsed.args)
}

/// `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str, path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                n + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown key `{key}`, valid keys: {}",
                path.display(),
                n + 1,
                FILE_KEYS.join(", ")
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value `{value}` for {key}")))
}

pub fn check_omega(omega: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&omega) {
        Ok(omega)
    } else {
        Err(CliError::InvalidOmega(omega))
    }
}

pub fn check_cfl(cfl: f64) -> Result<f64, CliError> {
    if cfl > 0.0 && cfl <= 1.0 {
        Ok(cfl)
    } else {
        Err(CliError::Usage(format!("--cfl must lie in (0, 1], got {cfl}")))
    }
}

pub fn check_cells(cells: usize) -> Result<usize, CliError> {
    if cells >= 2 {
        Ok(cells)
    } else {
        Err(CliError::Usage(format!("--cells must be at least 2, got {cells}")))
    }
}

pub fn resolve_t_end(case: &CaseDefinition, tend: Option<f64>) -> Result<f64, CliError> {
    match tend {
        None => Ok(case.t_end),
        Some(t) if t >= 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(CliError::Usage(format!("--tend must be nonnegative, got {t}"))),
    }
}

pub fn parse_kind(name: &str) -> Result<DissipationKind, CliError> {
    name.parse().map_err(CliError::Usage)
}

/// `kind` or `kind:omega`; hybrids without an explicit ω take the default.
pub fn parse_scheme(text: &str) -> Result<DissipationSpec, CliError> {
    let (name, omega) = match text.split_once(':') {
        Some((name, omega)) => (name, Some(parse_value::<f64>("omega", omega)?)),
        None => (text, None),
    };
    let kind = parse_kind(name)?;
    let omega = check_omega(omega.unwrap_or(DEFAULT_OMEGA))?;
    if kind.is_hybrid() {
        Ok(DissipationSpec::new(kind, omega)?)
    } else {
        Ok(DissipationSpec::plain(kind))
    }
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                parse_config_file(&text, path)?
            }
            None => BTreeMap::new(),
        };
        let from_file = |key: &str| file.get(key).map(String::as_str);

        let case_name = args
            .case
            .clone()
            .or_else(|| from_file("case").map(str::to_string))
            .unwrap_or_else(|| DEFAULT_CASE.to_string());
        let case = find_case(&case_name)?;

        let kind = match args.flux.as_deref().or(from_file("flux")) {
            Some(name) => parse_kind(name)?,
            None => DEFAULT_FLUX,
        };
        let omega = match args.omega {
            Some(w) => w,
            None => from_file("omega")
                .map(|v| parse_value("omega", v))
                .transpose()?
                .unwrap_or(DEFAULT_OMEGA),
        };
        let omega = check_omega(omega)?;
        let spec = if kind.is_hybrid() {
            DissipationSpec::new(kind, omega)?
        } else {
            DissipationSpec::plain(kind)
        };

        let cells = match args.cells {
            Some(k) => k,
            None => from_file("cells")
                .map(|v| parse_value("cells", v))
                .transpose()?
                .unwrap_or(DEFAULT_CELLS),
        };
        let cfl = match args.cfl {
            Some(c) => c,
            None => from_file("cfl")
                .map(|v| parse_value("cfl", v))
                .transpose()?
                .unwrap_or(DEFAULT_CFL),
        };
        let tend = match args.tend {
            Some(t) => Some(t),
            None => from_file("tend").map(|v| parse_value("tend", v)).transpose()?,
        };
        let audit = args.audit
            || from_file("audit")
                .map(|v| parse_value::<bool>("audit", v))
                .transpose()?
                .unwrap_or(false);
        let out = args
            .out
            .clone()
            .or_else(|| from_file("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let audit_out = args
            .audit_out
            .clone()
            .or_else(|| from_file("audit-out").map(PathBuf::from));

        Ok(Self {
            t_end: resolve_t_end(&case, tend)?,
            case,
            spec,
            cells: check_cells(cells)?,
            cfl: check_cfl(cfl)?,
            audit,
            out,
            audit_out,
        })
    }
}
