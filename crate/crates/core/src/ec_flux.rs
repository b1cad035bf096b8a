//! Entropy-conservative baseline fluxes and the Tadmor-condition checker.
//!
//! A two-point flux `f*` is entropy conservative when
//! `[[v]] . f* = [[psi]]`, with `psi = v . f - F` the entropy potential.

use crate::systems::{EquationSystem, IdealMhd, MhdState, MHD_VARS};
use crate::{SolverError, State};

/// Largest `|B1_R - B1_L|` accepted by the MHD flux.
pub const B1_JUMP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcFluxResult<const N: usize> {
    pub flux: State<N>,
    /// `[[v]] . flux - [[psi]]`
    pub tadmor_residual: f64,
}

/// `(uL^2 + uL uR + uR^2) / 6`, the entropy-conservative flux for `S = u^2/2`.
pub fn ec_flux_burgers(u_left: f64, u_right: f64) -> f64 {
    (u_left * u_left + u_left * u_right + u_right * u_right) / 6.0
}

/// `[[v]] . flux - [[psi]]` between two states.
pub fn check_tadmor<S: EquationSystem<N>, const N: usize>(
    system: &S,
    q_left: &State<N>,
    q_right: &State<N>,
    flux: &State<N>,
) -> Result<f64, SolverError> {
    let left = system.entropy_data(q_left)?;
    let right = system.entropy_data(q_right)?;
    let jump_v = right.variables - left.variables;
    Ok(jump_v.dot(flux) - (right.potential - left.potential))
}

/// Logarithmic mean `(a - b) / (ln a - ln b)` for positive arguments, with a
/// series expansion when `|a/b - 1| < 1e-4`. Symmetric to the last bit.
pub fn log_mean(a: f64, b: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let diff = a - b;
    if (diff / b).abs() < 1e-4 {
        let f = diff / (a + b);
        let u = f * f;
        (a + b) / (2.0 * (1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0))
    } else {
        diff / (diff / b).ln_1p()
    }
}

/// Entropy-conservative, kinetic-energy-preserving flux for 1D ideal MHD with
/// continuous `B1`.
///
/// Built from arithmetic means `{{.}}` and logarithmic means of density and
/// `beta = rho / (2p)`; the pressure average is `{{rho}} / (2 {{beta}})`.
pub fn ec_flux_mhd(
    system: &IdealMhd,
    q_left: &MhdState,
    q_right: &MhdState,
) -> Result<EcFluxResult<MHD_VARS>, SolverError> {
    let wl = system.cons_to_prim(q_left)?;
    let wr = system.cons_to_prim(q_right)?;
    let b1_jump = wr.b[0] - wl.b[0];
    if b1_jump.abs() > B1_JUMP_TOLERANCE {
        return Err(SolverError::B1Discontinuity(b1_jump));
    }
    let gamma = system.gamma();
    let avg = |a: f64, b: f64| 0.5 * (a + b);

    let beta_l = wl.rho / (2.0 * wl.p);
    let beta_r = wr.rho / (2.0 * wr.p);
    let rho_ln = log_mean(wl.rho, wr.rho);
    let beta_ln = log_mean(beta_l, beta_r);
    let rho_avg = avg(wl.rho, wr.rho);
    let beta_avg = avg(beta_l, beta_r);

    let [ul, vl, wwl] = wl.vel;
    let [ur, vr, wwr] = wr.vel;
    let (u, v, w) = (avg(ul, ur), avg(vl, vr), avg(wwl, wwr));
    let b1 = avg(wl.b[0], wr.b[0]);
    let (b2, b3) = (avg(wl.b[1], wr.b[1]), avg(wl.b[2], wr.b[2]));
    let b2_sq = avg(wl.b[1] * wl.b[1], wr.b[1] * wr.b[1]);
    let b3_sq = avg(wl.b[2] * wl.b[2], wr.b[2] * wr.b[2]);
    let speed_sq = avg(
        ul * ul + vl * vl + wwl * wwl,
        ur * ur + vr * vr + wwr * wwr,
    );
    let beta_u = avg(beta_l * ul, beta_r * ur);
    let beta_v = avg(beta_l * vl, beta_r * vr);
    let beta_w = avg(beta_l * wwl, beta_r * wwr);
    let transverse_sq = b2_sq + b3_sq - b1 * b1;

    let mass = rho_ln * u;
    let mom_x = mass * u + rho_avg / (2.0 * beta_avg) + 0.5 * transverse_sq;
    let mom_y = mass * v - b1 * b2;
    let mom_z = mass * w - b1 * b3;
    let ind_y = (beta_u * b2 - b1 * beta_v) / beta_avg;
    let ind_z = (beta_u * b3 - b1 * beta_w) / beta_avg;
    let energy = mass * (1.0 / (2.0 * (gamma - 1.0) * beta_ln) - 0.5 * speed_sq)
        + mom_x * u
        + mom_y * v
        + mom_z * w
        + ind_y * b2
        + ind_z * b3
        - 0.5 * u * transverse_sq
        + b1 * (b2 * v + b3 * w);

    let flux = MhdState::from([mass, mom_x, mom_y, mom_z, energy, 0.0, ind_y, ind_z]);
    let tadmor_residual = check_tadmor(system, q_left, q_right, &flux)?;
    Ok(EcFluxResult {
        flux,
        tadmor_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{Burgers, PrimitiveMhd};

    #[test]
    fn burgers_flux_values() {
        assert_eq!(ec_flux_burgers(0.0, 0.0), 0.0);
        assert_eq!(ec_flux_burgers(3.0, 3.0), 4.5);
        assert!((ec_flux_burgers(1.0, 2.0) - 7.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn burgers_tadmor_residuals() {
        let l = State::<1>::new(1.0);
        let r = State::<1>::new(2.0);
        let ec = check_tadmor(&Burgers, &l, &r, &State::<1>::new(7.0 / 6.0)).unwrap();
        assert!(ec.abs() < 1e-15);
        let central = check_tadmor(&Burgers, &l, &r, &State::<1>::new(1.25)).unwrap();
        assert!((central - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn tadmor_residual_vanishes_for_equal_states() {
        let q = State::<1>::new(-0.3);
        let f = Burgers.physical_flux(&q).unwrap();
        assert_eq!(check_tadmor(&Burgers, &q, &q, &f).unwrap(), 0.0);
    }

    #[test]
    fn log_mean_is_continuous_across_the_switch() {
        for &a in &[1.0, 0.37, 12.0] {
            for &eps in &[0.0, 1e-9, 9.9e-5, 1.01e-4, 1e-3, 0.5] {
                let b = a * (1.0 + eps);
                let m = log_mean(a, b);
                let exact = if eps == 0.0 {
                    a
                } else {
                    (b - a) / ((b - a) / a).ln_1p()
                };
                assert!((m - exact).abs() <= 1e-12 * exact, "a={a} eps={eps}");
                assert_eq!(m, log_mean(b, a));
            }
        }
    }

    #[test]
    fn mhd_flux_is_consistent_at_torrilhon_left_state() {
        let sys = IdealMhd::new(5.0 / 3.0).unwrap();
        let q = sys
            .prim_to_cons(&PrimitiveMhd::from_array([
                1.0, 0.0, 0.0, 0.0, 1.0, 1.5, 0.5, 0.6,
            ]))
            .unwrap();
        let r = ec_flux_mhd(&sys, &q, &q).unwrap();
        let f = sys.physical_flux(&q).unwrap();
        assert!((r.flux - f).amax() <= 1e-14 * f.amax().max(1.0));
        assert_eq!(r.tadmor_residual, 0.0);
    }

    #[test]
    fn mhd_flux_rejects_b1_jump() {
        let sys = IdealMhd::new(5.0 / 3.0).unwrap();
        let l = sys
            .prim_to_cons(&PrimitiveMhd::from_array([1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]))
            .unwrap();
        let r = sys
            .prim_to_cons(&PrimitiveMhd::from_array([1.0, 0.0, 0.0, 0.0, 1.0, 1.1, 0.0, 0.0]))
            .unwrap();
        assert!(matches!(
            ec_flux_mhd(&sys, &l, &r),
            Err(SolverError::B1Discontinuity(_))
        ));
    }
}
