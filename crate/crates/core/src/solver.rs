//! First-order finite-volume driver.
//!
//! Cells `C_i = [x_{i-1/2}, x_{i+1/2}]` may have different widths. One ghost
//! cell on each side holds the Dirichlet state; the ghost width equals the
//! width of its interior neighbour. Time integration is explicit Euler:
//!
//! ```text
//! q_i' = q_i - dt/Δx_i (f*_{i+1/2} - f*_{i-1/2})
//! ```
//!
//! The `Δt/Δx` ratio handed to an interface flux uses the mean of the two
//! adjacent cell widths.

use rayon::prelude::*;

use crate::audit::{self, SpdDiagnostic};
use crate::dissipation::{interface_flux, DissipationSpec, InterfaceContext, InterfaceFlux};
use crate::systems::EquationSystem;
use crate::{SolverError, State};

/// Tolerance on `production <= tol * ||[[v]]|| ||D H [[v]]||`.
pub const PRODUCTION_TOLERANCE: f64 = 1e-10;
/// Tolerance on the step-to-step growth of the total entropy budget.
pub const ENTROPY_BUDGET_TOLERANCE: f64 = 1e-10;
/// Relative tolerance on the semi-discrete cell residual.
pub const CELL_RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Tolerance on the relative symmetry defect and negative Rayleigh quotient
/// of `D H` in audit mode.
pub const SPD_TOLERANCE: f64 = 1e-10;

const SPEED_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<const N: usize> {
    interfaces: Vec<f64>,
    states: Vec<State<N>>,
}

impl<const N: usize> Grid1D<N> {
    /// Grid from `K + 1` strictly increasing interface coordinates and `K`
    /// cell states.
    pub fn new(interfaces: Vec<f64>, states: Vec<State<N>>) -> Result<Self, SolverError> {
        if states.len() < 2 || interfaces.len() != states.len() + 1 {
            return Err(SolverError::InvalidGrid(format!(
                "{} interfaces for {} cells (need K+1 interfaces, K >= 2)",
                interfaces.len(),
                states.len()
            )));
        }
        if let Some(w) = interfaces.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(SolverError::InvalidGrid(format!(
                "interfaces not strictly increasing near {} .. {}",
                w[0], w[1]
            )));
        }
        Ok(Self { interfaces, states })
    }

    /// Uniform grid on `[x_min, x_max]`, states from a function of the cell
    /// center.
    pub fn uniform(
        x_min: f64,
        x_max: f64,
        cells: usize,
        mut init: impl FnMut(f64) -> State<N>,
    ) -> Result<Self, SolverError> {
        if !(x_max > x_min) || cells == 0 {
            return Err(SolverError::InvalidGrid(format!(
                "bad domain [{x_min}, {x_max}] with {cells} cells"
            )));
        }
        let interfaces = uniform_interfaces(x_min, x_max, cells);
        let states = interfaces
            .windows(2)
            .map(|w| init(0.5 * (w[0] + w[1])))
            .collect();
        Self::new(interfaces, states)
    }

    pub fn cells(&self) -> usize {
        self.states.len()
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    pub fn states(&self) -> &[State<N>] {
        &self.states
    }

    pub fn width(&self, i: usize) -> f64 {
        self.interfaces[i + 1] - self.interfaces[i]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.interfaces.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.interfaces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `sum_i q_i Δx_i`
    pub fn totals(&self) -> State<N> {
        self.states
            .iter()
            .enumerate()
            .fold(State::<N>::zeros(), |acc, (i, q)| acc + q * self.width(i))
    }

    /// `sum_i S(q_i) Δx_i`
    pub fn total_entropy<S: EquationSystem<N>>(&self, system: &S) -> Result<f64, SolverError> {
        let mut total = 0.0;
        for (i, q) in self.states.iter().enumerate() {
            total += system.entropy_data(q)?.entropy * self.width(i);
        }
        Ok(total)
    }

    fn with_states(&self, states: Vec<State<N>>) -> Self {
        Self {
            interfaces: self.interfaces.clone(),
            states,
        }
    }
}

/// `K + 1` equally spaced interfaces; the last one is exactly `x_max`.
pub fn uniform_interfaces(x_min: f64, x_max: f64, cells: usize) -> Vec<f64> {
    let dx = (x_max - x_min) / cells as f64;
    (0..=cells)
        .map(|i| if i == cells { x_max } else { x_min + dx * i as f64 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletBoundary<const N: usize> {
    pub left: State<N>,
    pub right: State<N>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<const N: usize> {
    pub spec: DissipationSpec,
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: DirichletBoundary<N>,
    /// Full entropy audit each step; violations abort the run.
    pub audit: bool,
}

impl<const N: usize> SolverConfig<N> {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "t_end must be finite and nonnegative, got {}",
                self.t_end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    /// Time after the step.
    pub t: f64,
    pub dt: f64,
    /// `sum_i S_i Δx_i` after the step.
    pub total_entropy: f64,
    pub max_interface_production: f64,
    pub min_interface_production: f64,
    /// `sum_j -1/2 [[v]] . D H [[v]]` over all interfaces.
    pub total_production: f64,
    /// Worst `production - tol * scale` over interfaces; positive means a violation.
    pub production_excess: f64,
    /// `Δ(sum S Δx) + dt (F*_right - F*_left)` over the step.
    pub entropy_budget_residual: f64,
    /// `dt sum_i Δx_i e_i` with `e_i` the Euler defect of cell `i`; the part
    /// of the budget produced by the time integrator rather than the flux.
    pub euler_budget: f64,
    /// `max(|sum S Δx|)` before and after the step.
    pub entropy_scale: f64,
    /// Largest component of `Δ(sum q Δx) + dt (f*_right - f*_left)`,
    /// relative to the largest component of `sum |q| Δx`.
    pub conservation_defect: f64,
    /// Largest fully discrete cell residual; includes the Euler defect.
    pub max_cell_residual: f64,
    /// Largest cell residual with the Euler defect removed.
    pub max_semi_discrete_residual: f64,
    pub max_euler_defect: f64,
    /// `max(|S_i|, |F*_j|)` over the step, the scale for cell residuals.
    pub cell_scale: f64,
    pub spd: Option<SpdDiagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<const N: usize> {
    pub grid: Grid1D<N>,
    pub reports: Vec<StepReport>,
}

fn extended<const N: usize>(
    grid: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    i: usize,
) -> (State<N>, f64) {
    let k = grid.cells();
    match i {
        0 => (boundary.left, grid.width(0)),
        i if i == k + 1 => (boundary.right, grid.width(k - 1)),
        i => (grid.states[i - 1], grid.width(i - 1)),
    }
}

/// CFL time step, clipped so that `t + dt` lands on `t_end`.
pub fn compute_dt<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    cfl: f64,
    t: f64,
    t_end: f64,
) -> Result<f64, SolverError> {
    let k = grid.cells();
    let speeds = (0..=k)
        .into_par_iter()
        .map(|j| {
            let (ql, _) = extended(grid, boundary, j);
            let (qr, _) = extended(grid, boundary, j + 1);
            let (l, r) = system.wave_speed_estimates(&ql, &qr)?;
            Ok(l.abs().max(r.abs()))
        })
        .collect::<Result<Vec<f64>, SolverError>>()?;
    let mut dt = f64::INFINITY;
    for i in 0..k {
        let sigma = speeds[i].max(speeds[i + 1]);
        if sigma >= SPEED_FLOOR {
            dt = dt.min(grid.width(i) / sigma);
        }
    }
    if !dt.is_finite() {
        return Err(SolverError::ZeroWaveSpeed);
    }
    dt *= cfl;
    // A remainder below roundoff would make the next step meaningless.
    if t + dt * (1.0 + 1e-9) >= t_end {
        dt = t_end - t;
    }
    Ok(dt)
}

/// Interface fluxes for a grid with its ghost cells, `K + 1` entries.
pub fn interface_fluxes<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    spec: &DissipationSpec,
    dt: f64,
) -> Result<Vec<InterfaceFlux<N>>, SolverError> {
    (0..=grid.cells())
        .into_par_iter()
        .map(|j| {
            let (ql, wl) = extended(grid, boundary, j);
            let (qr, wr) = extended(grid, boundary, j + 1);
            interface_flux(spec, system, &ql, &qr, dt / (0.5 * (wl + wr)))
        })
        .collect()
}

/// One explicit Euler step from time `t`.
pub fn step<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: &Grid1D<N>,
    spec: &DissipationSpec,
    dt: f64,
    t: f64,
    boundary: &DirichletBoundary<N>,
    audit_mode: bool,
) -> Result<(Grid1D<N>, StepReport), SolverError> {
    let k = grid.cells();
    let fluxes = interface_fluxes(system, grid, boundary, spec, dt)?;

    let mut states = Vec::with_capacity(k);
    for i in 0..k {
        let q = grid.states[i] - (fluxes[i + 1].flux - fluxes[i].flux) * (dt / grid.width(i));
        system.validate(&q).map_err(|e| SolverError::CellFailure {
            cell: i,
            time: t + dt,
            reason: e.to_string(),
        })?;
        states.push(q);
    }
    let next = grid.with_states(states);

    let mut max_prod = f64::NEG_INFINITY;
    let mut min_prod = f64::INFINITY;
    let mut total_prod = 0.0;
    let mut excess = f64::NEG_INFINITY;
    for f in &fluxes {
        let p = f.production();
        max_prod = max_prod.max(p);
        min_prod = min_prod.min(p);
        total_prod += p;
        excess = excess.max(p - PRODUCTION_TOLERANCE * f.production_scale());
    }

    let flux_values: Vec<State<N>> = fluxes.iter().map(|f| f.flux).collect();
    let entropy_before = grid.total_entropy(system)?;
    let entropy_after = next.total_entropy(system)?;
    let entropy_fluxes = audit::numerical_entropy_fluxes(system, grid, boundary, &flux_values)?;
    let budget = entropy_after - entropy_before + dt * (entropy_fluxes[k] - entropy_fluxes[0]);

    let mass_scale = grid
        .states
        .iter()
        .enumerate()
        .fold(State::<N>::zeros(), |acc, (i, q)| acc + q.abs() * grid.width(i))
        .amax();
    let defect = next.totals() - grid.totals() + (flux_values[k] - flux_values[0]) * dt;
    let conservation_defect = if mass_scale > 0.0 {
        defect.amax() / mass_scale
    } else {
        defect.amax()
    };

    let residuals =
        audit::cell_entropy_residuals_with_fluxes(system, grid, &next, &entropy_fluxes, dt)?;
    let defects = audit::euler_entropy_defects(system, grid, &next, dt)?;
    let fold_max = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let max_cell_residual = fold_max(&mut residuals.iter().copied());
    let max_semi_discrete_residual = fold_max(&mut residuals.iter().zip(&defects).map(|(r, d)| r - d));
    let max_euler_defect = fold_max(&mut defects.iter().copied());
    let euler_budget = dt
        * defects
            .iter()
            .enumerate()
            .map(|(i, d)| d * grid.width(i))
            .sum::<f64>();
    let cell_scale = grid
        .states
        .iter()
        .chain(&next.states)
        .map(|q| system.entropy_data(q).map(|e| e.entropy.abs()))
        .chain(entropy_fluxes.iter().map(|f| Ok(f.abs())))
        .try_fold(0.0_f64, |acc, x| x.map(|x| acc.max(x)))?;

    let spd = if audit_mode {
        Some(audit_interfaces(system, grid, boundary, spec, dt)?)
    } else {
        None
    };

    Ok((
        next,
        StepReport {
            t: t + dt,
            dt,
            total_entropy: entropy_after,
            max_interface_production: max_prod,
            min_interface_production: min_prod,
            total_production: total_prod,
            production_excess: excess,
            entropy_budget_residual: budget,
            euler_budget,
            entropy_scale: entropy_before.abs().max(entropy_after.abs()),
            conservation_defect,
            max_cell_residual,
            max_semi_discrete_residual,
            max_euler_defect,
            cell_scale,
            spd,
        },
    ))
}

fn audit_interfaces<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    spec: &DissipationSpec,
    dt: f64,
) -> Result<SpdDiagnostic, SolverError> {
    let diagnostics = (0..=grid.cells())
        .into_par_iter()
        .map(|j| {
            let (ql, wl) = extended(grid, boundary, j);
            let (qr, wr) = extended(grid, boundary, j + 1);
            let ctx = InterfaceContext::new(system, &ql, &qr, dt / (0.5 * (wl + wr)))?;
            audit::spd_diagnostic(spec, &ctx, system)
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(diagnostics
        .into_iter()
        .fold(SpdDiagnostic::best(), SpdDiagnostic::worst_of))
}

fn check_report(report: &StepReport) -> Result<(), SolverError> {
    let fail = |detail: String| {
        Err(SolverError::EntropyViolation {
            time: report.t,
            detail,
        })
    };
    if report.production_excess > 0.0 {
        return fail(format!(
            "positive interface entropy production {:e}",
            report.max_interface_production
        ));
    }
    let semi_discrete = report.entropy_budget_residual - report.euler_budget;
    if semi_discrete > ENTROPY_BUDGET_TOLERANCE * report.entropy_scale {
        return fail(format!(
            "total entropy grew by {semi_discrete:e} beyond the Euler defect (scale {:e})",
            report.entropy_scale
        ));
    }
    if report.max_semi_discrete_residual > CELL_RESIDUAL_TOLERANCE * report.cell_scale {
        return fail(format!(
            "cell entropy residual {:e} (scale {:e})",
            report.max_semi_discrete_residual, report.cell_scale
        ));
    }
    if let Some(spd) = report.spd {
        if spd.symmetry_defect > SPD_TOLERANCE || spd.min_quadratic_ratio < -SPD_TOLERANCE {
            return fail(format!(
                "D H not symmetric positive semidefinite: defect {:e}, min ratio {:e}",
                spd.symmetry_defect, spd.min_quadratic_ratio
            ));
        }
    }
    Ok(())
}

/// Advances `grid` to `config.t_end`. Deterministic for a fixed input.
pub fn run<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: Grid1D<N>,
    config: &SolverConfig<N>,
) -> Result<RunOutput<N>, SolverError> {
    config.validate()?;
    for q in grid
        .states
        .iter()
        .chain([&config.boundary.left, &config.boundary.right])
    {
        system.validate(q)?;
    }
    let mut grid = grid;
    let mut reports = Vec::new();
    let mut t = 0.0;
    while t < config.t_end {
        let dt = compute_dt(system, &grid, &config.boundary, config.cfl, t, config.t_end)?;
        let (next, report) = step(
            system,
            &grid,
            &config.spec,
            dt,
            t,
            &config.boundary,
            config.audit,
        )?;
        if config.audit {
            check_report(&report)?;
        }
        t = if report.t >= config.t_end { config.t_end } else { report.t };
        grid = next;
        reports.push(report);
    }
    Ok(RunOutput { grid, reports })
}
