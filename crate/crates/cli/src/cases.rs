//! Shipped Riemann problems.

use es_riemann::solver::{DirichletBoundary, Grid1D};
use es_riemann::systems::{Burgers, EquationSystem, IdealMhd, PrimitiveMhd, MHD_VARS};
use es_riemann::{SolverError, State};

use crate::error::CliError;

/// A system that can be written to and read from solution CSV files, one
/// column per primitive variable.
pub trait CaseSystem<const N: usize>: EquationSystem<N> {
    const COLUMNS: [&'static str; N];

    fn to_primitive(&self, q: &State<N>) -> Result<[f64; N], SolverError>;
    #[allow(clippy::wrong_self_convention)]
    fn from_primitive(&self, w: &[f64; N]) -> Result<State<N>, SolverError>;
}

impl CaseSystem<MHD_VARS> for IdealMhd {
    const COLUMNS: [&'static str; MHD_VARS] = ["rho", "u", "v", "w", "p", "B1", "B2", "B3"];

    fn to_primitive(&self, q: &State<MHD_VARS>) -> Result<[f64; MHD_VARS], SolverError> {
        Ok(self.cons_to_prim(q)?.to_array())
    }

    fn from_primitive(&self, w: &[f64; MHD_VARS]) -> Result<State<MHD_VARS>, SolverError> {
        self.prim_to_cons(&PrimitiveMhd::from_array(*w))
    }
}

impl CaseSystem<1> for Burgers {
    const COLUMNS: [&'static str; 1] = ["u"];

    fn to_primitive(&self, q: &State<1>) -> Result<[f64; 1], SolverError> {
        Ok([q[0]])
    }

    fn from_primitive(&self, w: &[f64; 1]) -> Result<State<1>, SolverError> {
        Ok(State::<1>::new(w[0]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Mhd { gamma: f64 },
    Burgers,
}

/// Piecewise-constant Riemann data on `[x_min, x_max]` with the jump at
/// `x = 0` and Dirichlet states equal to the far-field data.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseDefinition {
    pub name: &'static str,
    pub model: Model,
    pub x_min: f64,
    pub x_max: f64,
    pub t_end: f64,
    /// Primitive variables, in the order of [`CaseSystem::COLUMNS`].
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

pub fn register_cases() -> Vec<CaseDefinition> {
    vec![
        CaseDefinition {
            name: "torrilhon",
            model: Model::Mhd { gamma: 5.0 / 3.0 },
            x_min: -4.0,
            x_max: 4.0,
            t_end: 1.0,
            left: vec![1.0, 0.0, 0.0, 0.0, 1.0, 1.5, 0.5, 0.6],
            right: vec![1.0, 0.0, 0.0, 0.0, 1.0, 1.5, 1.6, 0.2],
        },
        CaseDefinition {
            name: "burgers-rarefaction",
            model: Model::Burgers,
            x_min: -1.0,
            x_max: 1.0,
            t_end: 0.5,
            left: vec![-1.0],
            right: vec![1.0],
        },
        CaseDefinition {
            name: "burgers-shock",
            model: Model::Burgers,
            x_min: -1.0,
            x_max: 1.0,
            t_end: 0.5,
            left: vec![1.0],
            right: vec![-1.0],
        },
    ]
}

pub fn find_case(name: &str) -> Result<CaseDefinition, CliError> {
    let cases = register_cases();
    let names: Vec<_> = cases.iter().map(|c| c.name).collect();
    cases
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown case `{name}`, expected one of {}",
                names.join(", ")
            ))
        })
}

impl CaseDefinition {
    pub fn ideal_mhd(&self) -> Result<IdealMhd, SolverError> {
        match self.model {
            Model::Mhd { gamma } => IdealMhd::new(gamma),
            Model::Burgers => Err(SolverError::InvalidConfig(format!(
                "case {} is not an MHD case",
                self.name
            ))),
        }
    }

    fn data<const N: usize>(values: &[f64]) -> Result<[f64; N], SolverError> {
        values.try_into().map_err(|_| {
            SolverError::InvalidConfig(format!("expected {N} values, got {}", values.len()))
        })
    }

    pub fn boundary<S: CaseSystem<N>, const N: usize>(
        &self,
        system: &S,
    ) -> Result<DirichletBoundary<N>, SolverError> {
        Ok(DirichletBoundary {
            left: system.from_primitive(&Self::data(&self.left)?)?,
            right: system.from_primitive(&Self::data(&self.right)?)?,
        })
    }

    /// Uniform grid holding the Riemann data; a cell belongs to the left
    /// state when its center is `<= 0`.
    pub fn initial_grid<S: CaseSystem<N>, const N: usize>(
        &self,
        system: &S,
        cells: usize,
    ) -> Result<Grid1D<N>, SolverError> {
        let bc = self.boundary(system)?;
        Grid1D::uniform(self.x_min, self.x_max, cells, |x| {
            if x <= 0.0 {
                bc.left
            } else {
                bc.right
            }
        })
    }

    /// Exact cell averages over `[x_i, x_{i+1}]` at time `t`, for the
    /// Burgers cases.
    pub fn exact_cell_averages(&self, interfaces: &[f64], t: f64) -> Option<Vec<f64>> {
        if self.model != Model::Burgers {
            return None;
        }
        let (ul, ur) = (self.left[0], self.right[0]);
        let antiderivative = burgers_antiderivative(ul, ur, t);
        Some(
            interfaces
                .windows(2)
                .map(|w| (antiderivative(w[1]) - antiderivative(w[0])) / (w[1] - w[0]))
                .collect(),
        )
    }
}

/// `x -> integral of u(., t)` for Riemann data `(ul, ur)` at the origin,
/// normalized to be continuous.
fn burgers_antiderivative(ul: f64, ur: f64, t: f64) -> impl Fn(f64) -> f64 {
    move |x| {
        if t <= 0.0 || ul == ur {
            return if x <= 0.0 { ul * x } else { ur * x };
        }
        if ul > ur {
            let s = 0.5 * (ul + ur) * t;
            if x <= s {
                ul * x
            } else {
                ur * x + (ul - ur) * s
            }
        } else if x <= ul * t {
            ul * x
        } else if x >= ur * t {
            ur * x + 0.5 * (ul * ul - ur * ur) * t
        } else {
            x * x / (2.0 * t) + 0.5 * ul * ul * t
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torrilhon_data() {
        let c = find_case("torrilhon").unwrap();
        assert_eq!(&c.left[5..], &[1.5, 0.5, 0.6]);
        assert_eq!(c.left[5], c.right[5]);
        assert_eq!((c.x_min, c.x_max, c.t_end), (-4.0, 4.0, 1.0));
        assert_eq!(c.model, Model::Mhd { gamma: 5.0 / 3.0 });
    }

    #[test]
    fn unknown_case_is_a_usage_error() {
        assert!(matches!(find_case("sod"), Err(CliError::Usage(_))));
    }

    #[test]
    fn burgers_shock_does_not_move() {
        let c = find_case("burgers-shock").unwrap();
        let x: Vec<f64> = (0..=8).map(|i| -1.0 + 0.25 * i as f64).collect();
        for t in [0.1, 0.5, 3.0] {
            let avg = c.exact_cell_averages(&x, t).unwrap();
            assert_eq!(avg, vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
        }
    }

    #[test]
    fn rarefaction_fan_averages() {
        let c = find_case("burgers-rarefaction").unwrap();
        let avg = c.exact_cell_averages(&[-1.0, -0.5, 0.0, 0.25, 0.5, 1.0], 0.5).unwrap();
        // Fan u = x/t on [-0.5, 0.5].
        let expected = [-1.0, -0.5, 0.25, 0.75, 1.0];
        for (a, e) in avg.iter().zip(expected) {
            assert!((a - e).abs() < 1e-15, "{a} vs {e}");
        }
    }

    #[test]
    fn initial_grid_splits_at_origin() {
        let c = find_case("burgers-shock").unwrap();
        let g = c.initial_grid(&Burgers, 4).unwrap();
        let u: Vec<f64> = g.states().iter().map(|q| q[0]).collect();
        assert_eq!(u, vec![1.0, 1.0, -1.0, -1.0]);
    }
}
