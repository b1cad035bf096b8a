//! One-dimensional ideal magnetohydrodynamics.
//!
//! Conserved ordering: `[rho, rho u, rho v, rho w, E, B1, B2, B3]`. The normal
//! field `B1` is carried as a conserved variable with zero flux; the test cases
//! keep it spatially constant, which is the 1D form of `div B = 0`.
//!
//! Entropy pair: `S = -rho s / (gamma - 1)` with `s = ln p - gamma ln rho` and
//! `F = u S`. Entropy variables, with `beta = rho / (2 p)`:
//!
//! ```text
//! v = [ (gamma - s)/(gamma - 1) - beta |u|^2, 2 beta u, 2 beta v, 2 beta w,
//!       -2 beta, 2 beta B1, 2 beta B2, 2 beta B3 ]
//! ```

use super::{EntropyData, EquationSystem, SystemDescriptor};
use crate::ec_flux::ec_flux_mhd;
use crate::{Matrix, SolverError, State};
use nalgebra::SMatrix;

pub const MHD_VARS: usize = 8;

pub type MhdState = State<MHD_VARS>;

const RHO: usize = 0;
const ENERGY: usize = 4;
const B1: usize = 5;

/// Primitive MHD state: density, velocity, gas pressure, magnetic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveMhd {
    pub rho: f64,
    pub vel: [f64; 3],
    pub p: f64,
    pub b: [f64; 3],
}

impl PrimitiveMhd {
    pub fn new(rho: f64, vel: [f64; 3], p: f64, b: [f64; 3]) -> Self {
        Self { rho, vel, p, b }
    }

    /// From the `[rho, u, v, w, p, B1, B2, B3]` listing used for Riemann data.
    pub fn from_array(w: [f64; 8]) -> Self {
        Self::new(w[0], [w[1], w[2], w[3]], w[4], [w[5], w[6], w[7]])
    }

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.rho, self.vel[0], self.vel[1], self.vel[2], self.p, self.b[0], self.b[1],
            self.b[2],
        ]
    }

    fn check(&self) -> Result<(), SolverError> {
        let finite = self.to_array().iter().all(|x| x.is_finite());
        if !finite || self.rho <= 0.0 || self.p <= 0.0 {
            return Err(SolverError::NonphysicalState(format!(
                "rho = {}, p = {}",
                self.rho, self.p
            )));
        }
        Ok(())
    }

    fn speed_sq(&self) -> f64 {
        dot(&self.vel, &self.vel)
    }

    fn field_sq(&self) -> f64 {
        dot(&self.b, &self.b)
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Ideal MHD with a calorically perfect gas of adiabatic index `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealMhd {
    gamma: f64,
}

impl IdealMhd {
    pub fn new(gamma: f64) -> Result<Self, SolverError> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "adiabatic index must exceed 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn prim_to_cons(&self, w: &PrimitiveMhd) -> Result<MhdState, SolverError> {
        w.check()?;
        let kinetic = 0.5 * w.rho * w.speed_sq();
        let magnetic = 0.5 * w.field_sq();
        let energy = w.p / (self.gamma - 1.0) + kinetic + magnetic;
        Ok(MhdState::from([
            w.rho,
            w.rho * w.vel[0],
            w.rho * w.vel[1],
            w.rho * w.vel[2],
            energy,
            w.b[0],
            w.b[1],
            w.b[2],
        ]))
    }

    pub fn cons_to_prim(&self, q: &MhdState) -> Result<PrimitiveMhd, SolverError> {
        let rho = q[RHO];
        if !(rho > 0.0) {
            return Err(SolverError::NonphysicalState(format!("rho = {rho}")));
        }
        let vel = [q[1] / rho, q[2] / rho, q[3] / rho];
        let b = [q[5], q[6], q[7]];
        let p = (self.gamma - 1.0)
            * (q[ENERGY] - 0.5 * rho * dot(&vel, &vel) - 0.5 * dot(&b, &b));
        let w = PrimitiveMhd { rho, vel, p, b };
        w.check()?;
        Ok(w)
    }

    /// Fast magnetosonic speed `c_f`.
    pub fn fast_magnetosonic_speed(&self, w: &PrimitiveMhd) -> Result<f64, SolverError> {
        w.check()?;
        let a2 = self.gamma * w.p / w.rho;
        let b2 = w.field_sq() / w.rho;
        let b1sq = w.b[0] * w.b[0] / w.rho;
        let sum = a2 + b2;
        let disc = (sum * sum - 4.0 * a2 * b1sq).max(0.0);
        Ok((0.5 * (sum + disc.sqrt())).sqrt())
    }

    /// Exact Jacobian `df/dq` of the conservative flux. Its `B1` column does
    /// not symmetrize; see [`EquationSystem::flux_jacobian`] for the matrix
    /// used by the dissipation operators.
    pub fn conservative_jacobian(&self, q: &MhdState) -> Result<Matrix<MHD_VARS>, SolverError> {
        let w = self.cons_to_prim(q)?;
        Ok(self.flux_wrt_prim(&w) * self.prim_wrt_cons(&w))
    }

    /// `dw/dq` for `w = [rho, u, v, w, p, B1, B2, B3]`.
    fn prim_wrt_cons(&self, w: &PrimitiveMhd) -> Matrix<MHD_VARS> {
        let g1 = self.gamma - 1.0;
        let [u, v, ww] = w.vel;
        let inv_rho = 1.0 / w.rho;
        let mut m = Matrix::<MHD_VARS>::zeros();
        m[(0, 0)] = 1.0;
        for (k, vk) in [u, v, ww].into_iter().enumerate() {
            m[(1 + k, 0)] = -vk * inv_rho;
            m[(1 + k, 1 + k)] = inv_rho;
            m[(4, 1 + k)] = -g1 * vk;
        }
        m[(4, 0)] = 0.5 * g1 * w.speed_sq();
        m[(4, 4)] = g1;
        for k in 0..3 {
            m[(4, 5 + k)] = -g1 * w.b[k];
            m[(5 + k, 5 + k)] = 1.0;
        }
        m
    }

    /// `df/dw` of the conservative flux.
    fn flux_wrt_prim(&self, w: &PrimitiveMhd) -> Matrix<MHD_VARS> {
        let g = self.gamma;
        let rho = w.rho;
        let [u, v, ww] = w.vel;
        let [b1, b2, b3] = w.b;
        let bsq = w.field_sq();
        let mut m = Matrix::<MHD_VARS>::zeros();

        m[(0, 0)] = u;
        m[(0, 1)] = rho;

        m[(1, 0)] = u * u;
        m[(1, 1)] = 2.0 * rho * u;
        m[(1, 4)] = 1.0;
        m[(1, 5)] = -b1;
        m[(1, 6)] = b2;
        m[(1, 7)] = b3;

        m[(2, 0)] = u * v;
        m[(2, 1)] = rho * v;
        m[(2, 2)] = rho * u;
        m[(2, 5)] = -b2;
        m[(2, 6)] = -b1;

        m[(3, 0)] = u * ww;
        m[(3, 1)] = rho * ww;
        m[(3, 3)] = rho * u;
        m[(3, 5)] = -b3;
        m[(3, 7)] = -b1;

        // f_E = u (gamma p/(gamma-1) + rho|u|^2/2 + |B|^2) - B1 (u.B)
        m[(4, 0)] = 0.5 * u * w.speed_sq();
        m[(4, 1)] = g * w.p / (g - 1.0) + 0.5 * rho * w.speed_sq() + bsq + rho * u * u - b1 * b1;
        m[(4, 2)] = rho * u * v - b1 * b2;
        m[(4, 3)] = rho * u * ww - b1 * b3;
        m[(4, 4)] = u * g / (g - 1.0);
        m[(4, 5)] = -(v * b2 + ww * b3);
        m[(4, 6)] = 2.0 * u * b2 - b1 * v;
        m[(4, 7)] = 2.0 * u * b3 - b1 * ww;

        m[(6, 1)] = b2;
        m[(6, 2)] = -b1;
        m[(6, 5)] = -v;
        m[(6, 6)] = u;

        m[(7, 1)] = b3;
        m[(7, 3)] = -b1;
        m[(7, 5)] = -ww;
        m[(7, 7)] = u;
        m
    }

    /// `dv/dw` for the entropy variables.
    fn entropy_vars_wrt_prim(&self, w: &PrimitiveMhd) -> Matrix<MHD_VARS> {
        let g1 = self.gamma - 1.0;
        let (rho, p) = (w.rho, w.p);
        let mut m = Matrix::<MHD_VARS>::zeros();

        m[(0, 0)] = self.gamma / (rho * g1) - w.speed_sq() / (2.0 * p);
        m[(0, 4)] = -1.0 / (p * g1) + rho * w.speed_sq() / (2.0 * p * p);
        for k in 0..3 {
            let vk = w.vel[k];
            m[(0, 1 + k)] = -rho * vk / p;
            m[(1 + k, 0)] = vk / p;
            m[(1 + k, 1 + k)] = rho / p;
            m[(1 + k, 4)] = -rho * vk / (p * p);

            let bk = w.b[k];
            m[(5 + k, 0)] = bk / p;
            m[(5 + k, 4)] = -rho * bk / (p * p);
            m[(5 + k, 5 + k)] = rho / p;
        }
        m[(4, 0)] = -1.0 / p;
        m[(4, 4)] = rho / (p * p);
        m
    }
}

impl EquationSystem<MHD_VARS> for IdealMhd {
    fn descriptor(&self) -> SystemDescriptor {
        SystemDescriptor {
            name: "ideal-mhd",
            n_vars: MHD_VARS,
            gamma: Some(self.gamma),
        }
    }

    fn validate(&self, q: &MhdState) -> Result<(), SolverError> {
        self.cons_to_prim(q).map(|_| ())
    }

    fn physical_flux(&self, q: &MhdState) -> Result<MhdState, SolverError> {
        let w = self.cons_to_prim(q)?;
        let [u, v, ww] = w.vel;
        let [b1, b2, b3] = w.b;
        let rho = w.rho;
        let p_total = w.p + 0.5 * w.field_sq();
        let u_dot_b = dot(&w.vel, &w.b);
        Ok(MhdState::from([
            rho * u,
            rho * u * u + p_total - b1 * b1,
            rho * u * v - b1 * b2,
            rho * u * ww - b1 * b3,
            u * (q[ENERGY] + p_total) - b1 * u_dot_b,
            0.0,
            u * b2 - v * b1,
            u * b3 - ww * b1,
        ]))
    }

    fn entropy_data(&self, q: &MhdState) -> Result<EntropyData<MHD_VARS>, SolverError> {
        let w = self.cons_to_prim(q)?;
        let g = self.gamma;
        let s = w.p.ln() - g * w.rho.ln();
        let entropy = -w.rho * s / (g - 1.0);
        let beta = w.rho / (2.0 * w.p);
        let variables = MhdState::from([
            (g - s) / (g - 1.0) - beta * w.speed_sq(),
            2.0 * beta * w.vel[0],
            2.0 * beta * w.vel[1],
            2.0 * beta * w.vel[2],
            -2.0 * beta,
            2.0 * beta * w.b[0],
            2.0 * beta * w.b[1],
            2.0 * beta * w.b[2],
        ]);
        let flux = w.vel[0] * entropy;
        let potential = variables.dot(&self.physical_flux(q)?) - flux;
        Ok(EntropyData {
            entropy,
            variables,
            flux,
            potential,
        })
    }

    /// `df/dq` plus the Godunov-Powell column `Phi e_B1^T`,
    /// `Phi = [0, B1, B2, B3, u.B, u, v, w]`. On perturbations that leave `B1`
    /// unchanged it coincides with `df/dq`; unlike `df/dq` it is symmetrized by
    /// the entropy Jacobian and its spectrum is `u, u, u +- c_a, u +- c_s, u +- c_f`.
    fn flux_jacobian(&self, q: &MhdState) -> Result<Matrix<MHD_VARS>, SolverError> {
        let w = self.cons_to_prim(q)?;
        let mut a = self.flux_wrt_prim(&w) * self.prim_wrt_cons(&w);
        let powell = [
            0.0,
            w.b[0],
            w.b[1],
            w.b[2],
            dot(&w.vel, &w.b),
            w.vel[0],
            w.vel[1],
            w.vel[2],
        ];
        for (row, phi) in powell.into_iter().enumerate() {
            a[(row, B1)] += phi;
        }
        Ok(a)
    }

    fn entropy_hessian(&self, q: &MhdState) -> Result<Matrix<MHD_VARS>, SolverError> {
        let w = self.cons_to_prim(q)?;
        let m: SMatrix<f64, MHD_VARS, MHD_VARS> =
            self.entropy_vars_wrt_prim(&w) * self.prim_wrt_cons(&w);
        Ok(super::symmetrized(&m))
    }

    /// Davis-type bounds over the left, right and arithmetic-mean states.
    fn wave_speed_estimates(
        &self,
        q_left: &MhdState,
        q_right: &MhdState,
    ) -> Result<(f64, f64), SolverError> {
        let wl = self.cons_to_prim(q_left)?;
        let wr = self.cons_to_prim(q_right)?;
        let wm = mean_primitive(&wl, &wr);
        let cl = self.fast_magnetosonic_speed(&wl)?;
        let cr = self.fast_magnetosonic_speed(&wr)?;
        let cm = self.fast_magnetosonic_speed(&wm)?;
        let lambda_l = (wl.vel[0] - cl).min(wm.vel[0] - cm);
        let lambda_r = (wr.vel[0] + cr).max(wm.vel[0] + cm);
        Ok((lambda_l, lambda_r))
    }

    fn mean_state(&self, q_left: &MhdState, q_right: &MhdState) -> Result<MhdState, SolverError> {
        let wl = self.cons_to_prim(q_left)?;
        let wr = self.cons_to_prim(q_right)?;
        self.prim_to_cons(&mean_primitive(&wl, &wr))
    }

    fn ec_flux(&self, q_left: &MhdState, q_right: &MhdState) -> Result<MhdState, SolverError> {
        ec_flux_mhd(self, q_left, q_right).map(|r| r.flux)
    }
}

fn mean_primitive(a: &PrimitiveMhd, b: &PrimitiveMhd) -> PrimitiveMhd {
    let wa = a.to_array();
    let wb = b.to_array();
    let mut m = [0.0; 8];
    for k in 0..8 {
        m[k] = 0.5 * (wa[k] + wb[k]);
    }
    PrimitiveMhd::from_array(m)
}
