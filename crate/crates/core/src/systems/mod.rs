//! Equation-system contract and the two shipped systems.
//!
//! A system supplies the physical flux, an entropy pair, the entropy Hessian
//! `dv/dq`, a quasi-linear flux matrix `A` with `A H` symmetric, and signal
//! speed estimates. The dissipation operators never look inside `A`; they only
//! multiply by it.

mod burgers;
mod mhd;

pub use burgers::Burgers;
pub use mhd::{IdealMhd, MhdState, PrimitiveMhd, MHD_VARS};

use crate::{Matrix, SolverError, State};

/// Entropy `S`, entropy variables `v = dS/dq`, entropy flux `F` and entropy
/// potential `psi = v . f - F` at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyData<const N: usize> {
    pub entropy: f64,
    pub variables: State<N>,
    pub flux: f64,
    pub potential: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemDescriptor {
    pub name: &'static str,
    pub n_vars: usize,
    /// Adiabatic index; `None` for systems without an equation of state.
    pub gamma: Option<f64>,
}

pub trait EquationSystem<const N: usize>: Sync {
    fn descriptor(&self) -> SystemDescriptor;

    /// Checks the admissibility invariants of a conserved state.
    fn validate(&self, q: &State<N>) -> Result<(), SolverError>;

    fn physical_flux(&self, q: &State<N>) -> Result<State<N>, SolverError>;

    fn entropy_data(&self, q: &State<N>) -> Result<EntropyData<N>, SolverError>;

    /// Quasi-linear flux matrix at `q`. It agrees with `df/dq` on every
    /// admissible perturbation and satisfies `A H = (A H)^T`.
    fn flux_jacobian(&self, q: &State<N>) -> Result<Matrix<N>, SolverError>;

    /// Entropy Hessian `dv/dq = d^2 S / dq^2`.
    fn entropy_hessian(&self, q: &State<N>) -> Result<Matrix<N>, SolverError>;

    /// Entropy Jacobian `H = dq/dv`, the inverse of [`Self::entropy_hessian`],
    /// obtained from a Cholesky factorization.
    fn entropy_hessian_inverse(&self, q: &State<N>) -> Result<Matrix<N>, SolverError> {
        spd_inverse(&self.entropy_hessian(q)?)
    }

    /// `H rhs` without forming `H`.
    fn apply_entropy_jacobian(
        &self,
        q: &State<N>,
        rhs: &State<N>,
    ) -> Result<State<N>, SolverError> {
        let hessian = symmetrized(&self.entropy_hessian(q)?);
        let chol = hessian.cholesky().ok_or(SolverError::SingularHessian)?;
        Ok(chol.solve(rhs))
    }

    /// Fastest left- and right-going signal speeds, `lambda_L <= lambda_R`.
    fn wave_speed_estimates(
        &self,
        q_left: &State<N>,
        q_right: &State<N>,
    ) -> Result<(f64, f64), SolverError>;

    /// Conserved state built from the arithmetic mean of the primitive
    /// variables of the two states.
    fn mean_state(&self, q_left: &State<N>, q_right: &State<N>) -> Result<State<N>, SolverError>;

    /// Entropy-conservative two-point flux.
    fn ec_flux(&self, q_left: &State<N>, q_right: &State<N>) -> Result<State<N>, SolverError>;

    /// `|A|` for systems where it is a scalar (Roe-type comparator).
    fn scalar_roe_speed(&self, _q_left: &State<N>, _q_right: &State<N>) -> Option<f64> {
        None
    }
}

pub(crate) fn symmetrized<const N: usize>(m: &Matrix<N>) -> Matrix<N> {
    (m + m.transpose()) * 0.5
}

/// Inverse of a symmetric positive-definite matrix via Cholesky.
pub fn spd_inverse<const N: usize>(m: &Matrix<N>) -> Result<Matrix<N>, SolverError> {
    let chol = symmetrized(m)
        .cholesky()
        .ok_or(SolverError::SingularHessian)?;
    Ok(symmetrized(&chol.inverse()))
}
