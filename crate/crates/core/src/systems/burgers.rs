use super::{EntropyData, EquationSystem, SystemDescriptor};
use crate::ec_flux::ec_flux_burgers;
use crate::{Matrix, SolverError, State};

/// Inviscid Burgers equation `u_t + (u^2/2)_x = 0` with entropy `S = u^2/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Burgers;

impl Burgers {
    fn value(&self, q: &State<1>) -> Result<f64, SolverError> {
        let u = q[0];
        if u.is_finite() {
            Ok(u)
        } else {
            Err(SolverError::NonphysicalState(format!("u = {u}")))
        }
    }
}

impl EquationSystem<1> for Burgers {
    fn descriptor(&self) -> SystemDescriptor {
        SystemDescriptor {
            name: "burgers",
            n_vars: 1,
            gamma: None,
        }
    }

    fn validate(&self, q: &State<1>) -> Result<(), SolverError> {
        self.value(q).map(|_| ())
    }

    fn physical_flux(&self, q: &State<1>) -> Result<State<1>, SolverError> {
        let u = self.value(q)?;
        Ok(State::<1>::new(0.5 * u * u))
    }

    fn entropy_data(&self, q: &State<1>) -> Result<EntropyData<1>, SolverError> {
        let u = self.value(q)?;
        Ok(EntropyData {
            entropy: 0.5 * u * u,
            variables: State::<1>::new(u),
            flux: u * u * u / 3.0,
            potential: u * u * u / 6.0,
        })
    }

    fn flux_jacobian(&self, q: &State<1>) -> Result<Matrix<1>, SolverError> {
        Ok(Matrix::<1>::new(self.value(q)?))
    }

    fn entropy_hessian(&self, q: &State<1>) -> Result<Matrix<1>, SolverError> {
        self.value(q)?;
        Ok(Matrix::<1>::identity())
    }

    fn wave_speed_estimates(
        &self,
        q_left: &State<1>,
        q_right: &State<1>,
    ) -> Result<(f64, f64), SolverError> {
        let (ul, ur) = (self.value(q_left)?, self.value(q_right)?);
        Ok((ul.min(ur), ul.max(ur)))
    }

    fn mean_state(&self, q_left: &State<1>, q_right: &State<1>) -> Result<State<1>, SolverError> {
        let (ul, ur) = (self.value(q_left)?, self.value(q_right)?);
        Ok(State::<1>::new(0.5 * (ul + ur)))
    }

    fn ec_flux(&self, q_left: &State<1>, q_right: &State<1>) -> Result<State<1>, SolverError> {
        let (ul, ur) = (self.value(q_left)?, self.value(q_right)?);
        Ok(State::<1>::new(ec_flux_burgers(ul, ur)))
    }

    fn scalar_roe_speed(&self, q_left: &State<1>, q_right: &State<1>) -> Option<f64> {
        Some((0.5 * (q_left[0] + q_right[0])).abs())
    }
}
