//! Runtime certification of the discrete entropy inequality.
//!
//! For an interface flux `f* = f*EC - 1/2 D H [[v]]` the cell entropy obeys
//!
//! ```text
//! dS_i/dt + (F*_{i+1/2} - F*_{i-1/2}) / Δx_i = -(Q_{i+1/2} + Q_{i-1/2}) / (4 Δx_i)
//! ```
//!
//! with `Q = [[v]] . D H [[v]]` and the numerical entropy flux
//! `F* = {{v}} . f* - {{psi}}`. The audit checks the sign of each `Q`, the
//! resulting cell residuals after an explicit step, and that `D H` is
//! symmetric positive semidefinite.

use nalgebra::DMatrix;

use crate::dissipation::{apply_operator, interface_flux, DissipationSpec, InterfaceContext};
use crate::solver::{DirichletBoundary, Grid1D, PRODUCTION_TOLERANCE};
use crate::systems::EquationSystem;
use crate::{SolverError, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRecord {
    pub interface: usize,
    /// `-1/2 [[v]] . D H [[v]]` at the interface.
    pub production: f64,
    /// Entropy residual of the cell to the right of the interface, if any.
    pub cell_residual: Option<f64>,
    pub violation: bool,
}

/// `-1/2 [[v]] . D H [[v]]` for one interface.
pub fn interface_production<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    q_left: &State<N>,
    q_right: &State<N>,
    dt_over_dx: f64,
    system: &S,
) -> Result<f64, SolverError> {
    Ok(interface_flux(spec, system, q_left, q_right, dt_over_dx)?.production())
}

/// Whether `production` exceeds the tolerance at scale `||[[v]]|| ||D H [[v]]||`.
pub fn is_violation(production: f64, scale: f64) -> bool {
    production > PRODUCTION_TOLERANCE * scale
}

/// `{{v}} . f* - {{psi}}`
pub fn numerical_entropy_flux<S: EquationSystem<N>, const N: usize>(
    system: &S,
    q_left: &State<N>,
    q_right: &State<N>,
    flux: &State<N>,
) -> Result<f64, SolverError> {
    let l = system.entropy_data(q_left)?;
    let r = system.entropy_data(q_right)?;
    Ok(0.5 * (l.variables + r.variables).dot(flux) - 0.5 * (l.potential + r.potential))
}

/// Numerical entropy fluxes at all `K + 1` interfaces of `grid`.
pub fn numerical_entropy_fluxes<S: EquationSystem<N>, const N: usize>(
    system: &S,
    grid: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    fluxes: &[State<N>],
) -> Result<Vec<f64>, SolverError> {
    let k = grid.cells();
    if fluxes.len() != k + 1 {
        return Err(SolverError::InvalidGrid(format!(
            "{} fluxes for {k} cells",
            fluxes.len()
        )));
    }
    let states = grid.states();
    (0..=k)
        .map(|j| {
            let ql = if j == 0 { &boundary.left } else { &states[j - 1] };
            let qr = if j == k { &boundary.right } else { &states[j] };
            numerical_entropy_flux(system, ql, qr, &fluxes[j])
        })
        .collect()
}

/// `(S_i' - S_i)/dt + (F*_{i+1/2} - F*_{i-1/2})/Δx_i` for one completed step
/// from `before` to `after` with interface fluxes `fluxes`.
pub fn cell_entropy_residuals<S: EquationSystem<N>, const N: usize>(
    system: &S,
    before: &Grid1D<N>,
    after: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    fluxes: &[State<N>],
    dt: f64,
) -> Result<Vec<f64>, SolverError> {
    let entropy_fluxes = numerical_entropy_fluxes(system, before, boundary, fluxes)?;
    cell_entropy_residuals_with_fluxes(system, before, after, &entropy_fluxes, dt)
}

pub(crate) fn cell_entropy_residuals_with_fluxes<S: EquationSystem<N>, const N: usize>(
    system: &S,
    before: &Grid1D<N>,
    after: &Grid1D<N>,
    entropy_fluxes: &[f64],
    dt: f64,
) -> Result<Vec<f64>, SolverError> {
    (0..before.cells())
        .map(|i| {
            let s_old = system.entropy_data(&before.states()[i])?.entropy;
            let s_new = system.entropy_data(&after.states()[i])?.entropy;
            Ok((s_new - s_old) / dt
                + (entropy_fluxes[i + 1] - entropy_fluxes[i]) / before.width(i))
        })
        .collect()
}

/// `[S(q') - S(q) - v(q) . (q' - q)] / dt` per cell: the nonnegative entropy
/// gained by the explicit Euler update itself, absent from the semi-discrete
/// inequality.
pub fn euler_entropy_defects<S: EquationSystem<N>, const N: usize>(
    system: &S,
    before: &Grid1D<N>,
    after: &Grid1D<N>,
    dt: f64,
) -> Result<Vec<f64>, SolverError> {
    before
        .states()
        .iter()
        .zip(after.states())
        .map(|(q, q_new)| {
            let old = system.entropy_data(q)?;
            let s_new = system.entropy_data(q_new)?.entropy;
            Ok((s_new - old.entropy - old.variables.dot(&(q_new - q))) / dt)
        })
        .collect()
}

/// Cell residual minus the Euler defect. Equals
/// `-(Q_{i-1/2} + Q_{i+1/2}) / (4 Δx_i)` up to the Tadmor residual of the
/// baseline flux, so it is nonpositive for every entropy-stable scheme.
pub fn semi_discrete_residuals<S: EquationSystem<N>, const N: usize>(
    system: &S,
    before: &Grid1D<N>,
    after: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    fluxes: &[State<N>],
    dt: f64,
) -> Result<Vec<f64>, SolverError> {
    let residuals = cell_entropy_residuals(system, before, after, boundary, fluxes, dt)?;
    let defects = euler_entropy_defects(system, before, after, dt)?;
    Ok(residuals.iter().zip(&defects).map(|(r, d)| r - d).collect())
}

/// Per-interface production and per-cell residual for one step.
#[allow(clippy::too_many_arguments)]
pub fn audit_step<S: EquationSystem<N>, const N: usize>(
    system: &S,
    spec: &DissipationSpec,
    before: &Grid1D<N>,
    after: &Grid1D<N>,
    boundary: &DirichletBoundary<N>,
    dt: f64,
) -> Result<Vec<AuditRecord>, SolverError> {
    let fluxes = crate::solver::interface_fluxes(system, before, boundary, spec, dt)?;
    let values: Vec<State<N>> = fluxes.iter().map(|f| f.flux).collect();
    let residuals = cell_entropy_residuals(system, before, after, boundary, &values, dt)?;
    Ok(fluxes
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let production = f.production();
            AuditRecord {
                interface: j,
                production,
                cell_residual: residuals.get(j).copied(),
                violation: is_violation(production, f.production_scale()),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdDiagnostic {
    /// `||M - M^T|| / ||M||` for `M = D H` (Frobenius norms).
    pub symmetry_defect: f64,
    /// `min z^T M z / ||z||^2`, the smallest eigenvalue of the symmetric part.
    pub min_quadratic_ratio: f64,
    /// `||M||`
    pub norm: f64,
}

impl SpdDiagnostic {
    pub(crate) fn best() -> Self {
        Self {
            symmetry_defect: 0.0,
            min_quadratic_ratio: f64::INFINITY,
            norm: 0.0,
        }
    }

    pub(crate) fn worst_of(self, other: Self) -> Self {
        Self {
            symmetry_defect: self.symmetry_defect.max(other.symmetry_defect),
            min_quadratic_ratio: self.min_quadratic_ratio.min(other.min_quadratic_ratio),
            norm: self.norm.max(other.norm),
        }
    }
}

/// Assembles `D H` column by column (`D` applied to the columns of `H`) and
/// reports its symmetry defect and smallest Rayleigh quotient.
pub fn spd_diagnostic<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    ctx: &InterfaceContext<N>,
    system: &S,
) -> Result<SpdDiagnostic, SolverError> {
    let h = system.entropy_hessian_inverse(&ctx.q_mean)?;
    let mut m = DMatrix::<f64>::zeros(N, N);
    for j in 0..N {
        let column: State<N> = h.column(j).into_owned();
        let dh = apply_operator(spec, ctx, system, &column)?;
        m.set_column(j, &dh);
    }
    let norm = m.norm();
    let asym = (&m - m.transpose()).norm();
    let symmetric = (&m + m.transpose()) * 0.5;
    let min_eig = symmetric
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(SpdDiagnostic {
        symmetry_defect: if norm > 0.0 { asym / norm } else { 0.0 },
        min_quadratic_ratio: min_eig,
        norm,
    })
}
