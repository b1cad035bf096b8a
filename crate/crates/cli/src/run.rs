use std::path::Path;

use es_riemann::dissipation::{DissipationKind, DissipationSpec};
use es_riemann::solver::{run, Grid1D, RunOutput, SolverConfig};
use es_riemann::systems::Burgers;
use es_riemann::State;

use crate::cases::{CaseDefinition, CaseSystem, Model};
use crate::config::{check_cells, check_cfl, RunConfig};
use crate::error::CliError;
use crate::output::{emit_audit_csv, emit_metadata, emit_solution_csv, metadata_path, solution_csv, write_file};

/// Everything that defines a run apart from the output paths.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSetup {
    pub case: CaseDefinition,
    pub spec: DissipationSpec,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub audit: bool,
}

impl From<&RunConfig> for RunSetup {
    fn from(c: &RunConfig) -> Self {
        Self {
            case: c.case.clone(),
            spec: c.spec,
            cells: c.cells,
            cfl: c.cfl,
            t_end: c.t_end,
            audit: c.audit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveSummary {
    pub steps: usize,
    pub total_entropy: f64,
    /// Entropy removed by the scheme, boundary entropy fluxes accounted for.
    pub entropy_dissipated: f64,
}

impl SolveSummary {
    pub fn of<const N: usize>(initial_entropy: f64, out: &RunOutput<N>) -> Self {
        Self {
            steps: out.reports.len(),
            total_entropy: out.reports.last().map_or(initial_entropy, |r| r.total_entropy),
            entropy_dissipated: -out
                .reports
                .iter()
                .map(|r| r.entropy_budget_residual)
                .sum::<f64>(),
        }
    }
}

pub fn run_case<S: CaseSystem<N>, const N: usize>(
    system: &S,
    setup: &RunSetup,
) -> Result<RunOutput<N>, CliError> {
    check_cells(setup.cells)?;
    check_cfl(setup.cfl)?;
    let grid = setup.case.initial_grid(system, setup.cells)?;
    let config = SolverConfig {
        spec: setup.spec,
        cfl: setup.cfl,
        t_end: setup.t_end,
        boundary: setup.case.boundary(system)?,
        audit: setup.audit,
    };
    Ok(run(system, grid, &config)?)
}

fn solve_with<S: CaseSystem<N>, const N: usize>(
    system: &S,
    config: &RunConfig,
) -> Result<SolveSummary, CliError> {
    let setup = RunSetup::from(config);
    let initial = setup
        .case
        .initial_grid(system, setup.cells)?
        .total_entropy(system)?;
    let out = run_case(system, &setup)?;
    emit_solution_csv(&out.grid, system, &config.out)?;
    if let Some(path) = &config.audit_out {
        emit_audit_csv(&out.reports, path)?;
    }
    Ok(SolveSummary::of(initial, &out))
}

/// Runs one configuration and writes its solution (and audit) files.
pub fn solve(config: &RunConfig) -> Result<SolveSummary, CliError> {
    match config.case.model {
        Model::Mhd { .. } => solve_with(&config.case.ideal_mhd()?, config),
        Model::Burgers => solve_with(&Burgers, config),
    }
}

/// Reference solution: ES-LLF on `cells` cells for MHD cases, exact cell
/// averages for Burgers cases. Writes the CSV and a `.meta` sidecar.
pub fn make_reference(
    case: &CaseDefinition,
    cells: usize,
    cfl: f64,
    t_end: f64,
    out: &Path,
) -> Result<(), CliError> {
    check_cells(cells)?;
    let cfl = check_cfl(cfl)?;
    let scheme = match case.model {
        Model::Mhd { .. } => {
            let system = case.ideal_mhd()?;
            let setup = RunSetup {
                case: case.clone(),
                spec: DissipationSpec::plain(DissipationKind::LocalLaxFriedrichs),
                cells,
                cfl,
                t_end,
                audit: false,
            };
            let run = run_case(&system, &setup)?;
            write_file(out, &solution_csv(&run.grid, &system, out)?)?;
            "llf"
        }
        Model::Burgers => {
            let grid = exact_burgers_grid(case, cells, t_end)?;
            write_file(out, &solution_csv(&grid, &Burgers, out)?)?;
            "exact"
        }
    };
    emit_metadata(
        &metadata_path(out),
        &[
            ("case", case.name.to_string()),
            ("scheme", scheme.to_string()),
            ("cells", cells.to_string()),
            ("cfl", cfl.to_string()),
            ("t_end", t_end.to_string()),
            ("x_min", case.x_min.to_string()),
            ("x_max", case.x_max.to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
        ],
    )
}

pub fn exact_burgers_grid(
    case: &CaseDefinition,
    cells: usize,
    t: f64,
) -> Result<Grid1D<1>, CliError> {
    let template = case.initial_grid(&Burgers, cells)?;
    let averages = case
        .exact_cell_averages(template.interfaces(), t)
        .ok_or_else(|| CliError::Usage(format!("case {} has no exact solution", case.name)))?;
    Ok(Grid1D::new(
        template.interfaces().to_vec(),
        averages.into_iter().map(State::<1>::new).collect(),
    )?)
}
