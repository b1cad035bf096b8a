//! Scheme comparison against a reference solution.

use std::path::Path;
use std::time::{Duration, Instant};

use es_riemann::dissipation::{DissipationKind, DissipationSpec};
use es_riemann::solver::{uniform_interfaces, Grid1D};
use es_riemann::systems::Burgers;
use rayon::prelude::*;

use crate::cases::{CaseDefinition, CaseSystem, Model};
use crate::config::DEFAULT_OMEGA;
use crate::error::CliError;
use crate::output::{format_number, write_file, SolutionTable};
use crate::run::{exact_burgers_grid, run_case, RunSetup, SolveSummary};

pub const THREADS_ENV: &str = "ES_RIEMANN_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// Exact cell averages; Burgers cases only.
    Exact,
    Table(SolutionTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDistance {
    pub variable: String,
    pub l1: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeReport {
    pub label: String,
    pub distances: Vec<VariableDistance>,
    pub entropy_dissipated: f64,
    pub runtime: Duration,
}

impl SchemeReport {
    pub fn distance(&self, variable: &str) -> Option<&VariableDistance> {
        self.distances.iter().find(|d| d.variable == variable)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub case: String,
    pub cells: usize,
    pub schemes: Vec<SchemeReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub case: CaseDefinition,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub specs: Vec<DissipationSpec>,
}

/// ES-LLF against ES-HLLXω for MHD, scalar ES-Roe against ES-HLLXω for
/// Burgers.
pub fn default_schemes(case: &CaseDefinition) -> Vec<DissipationSpec> {
    let baseline = match case.model {
        Model::Mhd { .. } => DissipationKind::LocalLaxFriedrichs,
        Model::Burgers => DissipationKind::RoeScalar,
    };
    vec![
        DissipationSpec::plain(baseline),
        DissipationSpec::new(DissipationKind::HllxOmega, DEFAULT_OMEGA)
            .expect("default omega is in range"),
    ]
}

/// Columns of a run as a table, the same values a solution CSV would hold.
pub fn table_of<S: CaseSystem<N>, const N: usize>(
    grid: &Grid1D<N>,
    system: &S,
) -> Result<SolutionTable, CliError> {
    let mut columns: Vec<String> = S::COLUMNS.iter().map(|c| c.to_string()).collect();
    columns.push("S".into());
    let mut values = vec![Vec::with_capacity(grid.cells()); N + 1];
    for q in grid.states() {
        for (c, w) in system.to_primitive(q)?.into_iter().enumerate() {
            values[c].push(w);
        }
        values[N].push(system.entropy_data(q)?.entropy);
    }
    Ok(SolutionTable {
        columns,
        x: grid.centers(),
        values,
    })
}

/// Piecewise-constant reference averaged over each target cell. The
/// reference must be a uniform grid over `[x_min, x_max]`.
pub fn project(
    reference: &SolutionTable,
    x_min: f64,
    x_max: f64,
    target: &[f64],
) -> Result<Vec<Vec<f64>>, CliError> {
    let n = reference.x.len();
    if n < 1 {
        return Err(CliError::GridMismatch("empty reference".into()));
    }
    let edges = uniform_interfaces(x_min, x_max, n);
    let tol = 1e-9 * (x_max - x_min);
    for (i, &x) in reference.x.iter().enumerate() {
        if (x - 0.5 * (edges[i] + edges[i + 1])).abs() > tol {
            return Err(CliError::GridMismatch(format!(
                "reference row {i} at x = {x} is not a cell center of a uniform {n}-cell grid on [{x_min}, {x_max}]"
            )));
        }
    }
    if (target[0] - x_min).abs() > tol || (target[target.len() - 1] - x_max).abs() > tol {
        return Err(CliError::GridMismatch(format!(
            "run domain [{}, {}] differs from the reference domain [{x_min}, {x_max}]",
            target[0],
            target[target.len() - 1]
        )));
    }
    let mut out = vec![Vec::with_capacity(target.len() - 1); reference.columns.len()];
    let mut first = 0;
    for cell in target.windows(2) {
        let (a, b) = (cell[0], cell[1]);
        while first + 1 < n && edges[first + 1] <= a {
            first += 1;
        }
        let mut overlaps = Vec::new();
        let mut j = first;
        while j < n && edges[j] < b {
            let w = edges[j + 1].min(b) - edges[j].max(a);
            if w > 0.0 {
                overlaps.push((j, w));
            }
            j += 1;
        }
        for (c, column) in out.iter_mut().enumerate() {
            let values = &reference.values[c];
            let avg = match overlaps.as_slice() {
                [(j, _)] => values[*j],
                _ => overlaps.iter().map(|&(j, w)| values[j] * w).sum::<f64>() / (b - a),
            };
            column.push(avg);
        }
    }
    Ok(out)
}

/// L1 (`sum |a - b| Δx`) and L∞ distances of every primitive column.
pub fn distances(
    run: &SolutionTable,
    projected: &[Vec<f64>],
    reference_columns: &[String],
    widths: &[f64],
) -> Result<Vec<VariableDistance>, CliError> {
    run.columns
        .iter()
        .enumerate()
        .filter(|(_, name)| name.as_str() != "S")
        .map(|(c, name)| {
            let r = reference_columns
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| CliError::GridMismatch(format!("reference has no column {name}")))?;
            let (mut l1, mut linf) = (0.0_f64, 0.0_f64);
            for ((a, b), w) in run.values[c].iter().zip(&projected[r]).zip(widths) {
                let d = (a - b).abs();
                l1 += d * w;
                linf = linf.max(d);
            }
            Ok(VariableDistance {
                variable: name.clone(),
                l1,
                linf,
            })
        })
        .collect()
}

fn thread_count(runs: usize) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(|n| n.min(runs.max(1)))
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(runs.max(1)),
    }
}

fn compare_one<S: CaseSystem<N>, const N: usize>(
    system: &S,
    config: &CompareConfig,
    spec: DissipationSpec,
    reference: &Reference,
) -> Result<SchemeReport, CliError> {
    let start = Instant::now();
    let setup = RunSetup {
        case: config.case.clone(),
        spec,
        cells: config.cells,
        cfl: config.cfl,
        t_end: config.t_end,
        audit: false,
    };
    let initial = setup.case.initial_grid(system, setup.cells)?.total_entropy(system)?;
    let out = run_case(system, &setup)?;
    let runtime = start.elapsed();
    let table = table_of(&out.grid, system)?;
    let interfaces = out.grid.interfaces();
    let (projected, columns) = match reference {
        Reference::Table(t) => (
            project(t, config.case.x_min, config.case.x_max, interfaces)?,
            t.columns.clone(),
        ),
        Reference::Exact => {
            let averages = config
                .case
                .exact_cell_averages(interfaces, config.t_end)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "case {} has no exact solution; pass --reference",
                        config.case.name
                    ))
                })?;
            (vec![averages], vec![S::COLUMNS[0].to_string()])
        }
    };
    Ok(SchemeReport {
        label: spec.label(),
        distances: distances(&table, &projected, &columns, &out.grid.widths())?,
        entropy_dissipated: SolveSummary::of(initial, &out).entropy_dissipated,
        runtime,
    })
}

/// Runs every scheme of `config` (concurrently, at most
/// `ES_RIEMANN_THREADS` at a time) and measures it against `reference`.
pub fn compare(config: &CompareConfig, reference: &Reference) -> Result<ComparisonReport, CliError> {
    if config.specs.is_empty() {
        return Err(CliError::Usage("no schemes to compare".into()));
    }
    if let Reference::Table(t) = reference {
        if t.x.len() < config.cells {
            return Err(CliError::GridMismatch(format!(
                "reference has {} cells, fewer than the {} of the runs",
                t.x.len(),
                config.cells
            )));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(config.specs.len())?)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let schemes = pool.install(|| {
        config
            .specs
            .par_iter()
            .map(|&spec| match config.case.model {
                Model::Mhd { .. } => compare_one(&config.case.ideal_mhd()?, config, spec, reference),
                Model::Burgers => compare_one(&Burgers, config, spec, reference),
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    Ok(ComparisonReport {
        case: config.case.name.to_string(),
        cells: config.cells,
        schemes,
    })
}

/// `scheme,variable,l1,linf,entropy_dissipated`; runtimes are left out so
/// that the file is reproducible.
pub fn comparison_csv(report: &ComparisonReport, path: &Path) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["scheme", "variable", "l1", "linf", "entropy_dissipated"])
        .map_err(CliError::csv(path))?;
    for s in &report.schemes {
        for d in &s.distances {
            w.write_record([
                s.label.clone(),
                d.variable.clone(),
                format_number(d.l1),
                format_number(d.linf),
                format_number(s.entropy_dissipated),
            ])
            .map_err(CliError::csv(path))?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into_error(),
    })
}

pub fn emit_comparison_csv(report: &ComparisonReport, path: &Path) -> Result<(), CliError> {
    write_file(path, &comparison_csv(report, path)?)
}

/// Exact Burgers reference as a table on `cells` cells.
pub fn exact_reference_table(case: &CaseDefinition, cells: usize, t: f64) -> Result<SolutionTable, CliError> {
    table_of(&exact_burgers_grid(case, cells, t)?, &Burgers)
}
