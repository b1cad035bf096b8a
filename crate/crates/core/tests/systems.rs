mod common;

use common::{gradient, mhd, random_primitive, random_state, rng};
use es_riemann::systems::{Burgers, EquationSystem, PrimitiveMhd, MHD_VARS};
use es_riemann::{Matrix, State};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::Rng;

fn rel(a: f64, scale: f64) -> f64 {
    a / scale.max(1.0)
}

#[test]
fn entropy_variables_are_the_entropy_gradient() {
    let sys = mhd();
    let mut r = rng(1);
    for _ in 0..200 {
        let q = random_state(&mut r);
        let v = sys.entropy_data(&q).unwrap().variables;
        let fd = gradient(|x| sys.entropy_data(x).unwrap().entropy, &q);
        assert!(rel((v - fd).amax(), v.amax()) < 1e-6, "v={v} fd={fd}");
    }
}

#[test]
fn entropy_flux_is_compatible_with_the_flux() {
    // dF/dq = v^T A holds for the symmetrizable form; the conservative
    // Jacobian misses it in the B1 column.
    let sys = mhd();
    let mut r = rng(2);
    for _ in 0..200 {
        let q = random_state(&mut r);
        let v = sys.entropy_data(&q).unwrap().variables;
        let a = sys.flux_jacobian(&q).unwrap();
        let expected = a.transpose() * v;
        let fd = gradient(|x| sys.entropy_data(x).unwrap().flux, &q);
        assert!(rel((expected - fd).amax(), fd.amax()) < 1e-6);
    }
}

#[test]
fn entropy_potential_matches_closed_form() {
    let sys = mhd();
    let mut r = rng(3);
    for _ in 0..200 {
        let b1 = r.gen_range(-2.0..2.0);
        let w = random_primitive(&mut r, b1);
        let q = sys.prim_to_cons(&w).unwrap();
        let psi = sys.entropy_data(&q).unwrap().potential;
        let beta = w.rho / (2.0 * w.p);
        let [u, v, ww] = w.vel;
        let [b1, b2, b3] = w.b;
        let b_sq = b1 * b1 + b2 * b2 + b3 * b3;
        let closed = w.rho * u + beta * u * b_sq - 2.0 * beta * b1 * (u * b1 + v * b2 + ww * b3);
        assert!((psi - closed).abs() <= 1e-12 * closed.abs().max(1.0));
    }
}

#[test]
fn conservative_jacobian_matches_finite_differences() {
    let sys = mhd();
    let mut r = rng(4);
    for _ in 0..100 {
        let q = random_state(&mut r);
        let a = sys.conservative_jacobian(&q).unwrap();
        for j in 0..MHD_VARS {
            let col = gradient_column(|x| sys.physical_flux(x).unwrap(), &q, j);
            let err = (a.column(j) - col).amax();
            assert!(rel(err, col.amax()) < 1e-6, "column {j}");
        }
    }
}

fn gradient_column<const N: usize>(
    f: impl Fn(&State<N>) -> State<N>,
    q: &State<N>,
    j: usize,
) -> State<N> {
    let h = 1e-6 * q[j].abs().max(1.0);
    let mut plus = *q;
    let mut minus = *q;
    plus[j] += h;
    minus[j] -= h;
    (f(&plus) - f(&minus)) / (2.0 * h)
}

#[test]
fn symmetrizable_jacobian_agrees_off_the_normal_field() {
    // The two forms differ only in the B1 column.
    let sys = mhd();
    let mut r = rng(5);
    for _ in 0..100 {
        let q = random_state(&mut r);
        let a = sys.flux_jacobian(&q).unwrap();
        let c = sys.conservative_jacobian(&q).unwrap();
        for j in (0..MHD_VARS).filter(|&j| j != 5) {
            assert!((a.column(j) - c.column(j)).amax() <= 1e-12 * c.amax());
        }
    }
}

#[test]
fn jacobian_times_entropy_jacobian_is_symmetric() {
    let sys = mhd();
    let mut r = rng(6);
    for _ in 0..100 {
        let q = random_state(&mut r);
        let ah = sys.flux_jacobian(&q).unwrap() * sys.entropy_hessian_inverse(&q).unwrap();
        assert!((ah - ah.transpose()).norm() <= 1e-10 * ah.norm());
    }
}

#[test]
fn entropy_hessian_is_spd_and_inverts() {
    let sys = mhd();
    let mut r = rng(7);
    for _ in 0..100 {
        let q = random_state(&mut r);
        let v = sys.entropy_hessian(&q).unwrap();
        let h = sys.entropy_hessian_inverse(&q).unwrap();
        assert!((h - h.transpose()).amax() <= 1e-12 * h.amax());
        assert!(h.cholesky().is_some());
        let id = h * v;
        assert!((id - Matrix::<MHD_VARS>::identity()).amax() < 1e-10 * v.amax().max(h.amax()));
        let fd = gradient_column(|x| sys.entropy_data(x).unwrap().variables, &q, 0);
        assert!(rel((v.column(0) - fd).amax(), fd.amax()) < 1e-5);
    }
}

#[test]
fn apply_entropy_jacobian_solves_the_hessian_system() {
    let sys = mhd();
    let mut r = rng(8);
    for _ in 0..50 {
        let q = random_state(&mut r);
        let rhs = State::<MHD_VARS>::from_fn(|_, _| r.gen_range(-1.0..1.0));
        let x = sys.apply_entropy_jacobian(&q, &rhs).unwrap();
        let back = sys.entropy_hessian(&q).unwrap() * x;
        assert!((back - rhs).amax() < 1e-10 * sys.entropy_hessian(&q).unwrap().amax() * x.amax());
    }
}

fn eigenvalues(sys: &impl EquationSystem<MHD_VARS>, q: &State<MHD_VARS>) -> Vec<f64> {
    // A is similar to L^-1 (A H) L^-T with H = L L^T, which is symmetric.
    let h = sys.entropy_hessian_inverse(q).unwrap();
    let l = h.cholesky().unwrap().l();
    let l_inv = l.try_inverse().unwrap();
    let m = l_inv * sys.flux_jacobian(q).unwrap() * h * l_inv.transpose();
    let m = DMatrix::from_fn(MHD_VARS, MHD_VARS, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

#[test]
fn wave_speed_estimates_bracket_the_mean_state_spectrum() {
    let sys = mhd();
    let mut r = rng(9);
    for _ in 0..200 {
        let (ql, qr) = common::random_pair(&mut r);
        let (lo, hi) = sys.wave_speed_estimates(&ql, &qr).unwrap();
        let mean = sys.mean_state(&ql, &qr).unwrap();
        for lambda in eigenvalues(&sys, &mean) {
            assert!(lambda >= lo - 1e-10 * lo.abs().max(1.0), "{lambda} < {lo}");
            assert!(lambda <= hi + 1e-10 * hi.abs().max(1.0), "{lambda} > {hi}");
        }
    }
}

#[test]
fn spectrum_contains_the_fast_speeds() {
    let sys = mhd();
    let mut r = rng(10);
    for _ in 0..50 {
        let b1 = r.gen_range(-2.0..2.0);
        let w = random_primitive(&mut r, b1);
        let q = sys.prim_to_cons(&w).unwrap();
        let cf = sys.fast_magnetosonic_speed(&w).unwrap();
        let ev = eigenvalues(&sys, &q);
        let max = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((max - (w.vel[0] + cf)).abs() < 1e-8 * cf);
        assert!((min - (w.vel[0] - cf)).abs() < 1e-8 * cf);
    }
}

#[test]
fn burgers_entropy_pair() {
    let q = State::<1>::new(1.5);
    let e = Burgers.entropy_data(&q).unwrap();
    assert_eq!(e.entropy, 1.125);
    assert_eq!(e.variables[0], 1.5);
    assert_eq!(e.flux, 1.125);
    assert_eq!(e.potential, 0.5625);
    assert_eq!(Burgers.entropy_hessian_inverse(&q).unwrap()[(0, 0)], 1.0);
}

proptest! {
    #[test]
    fn primitive_round_trip(
        rho in 0.01..10.0f64,
        u in -5.0..5.0f64,
        v in -5.0..5.0f64,
        w in -5.0..5.0f64,
        p in 0.01..10.0f64,
        b1 in -3.0..3.0f64,
        b2 in -3.0..3.0f64,
        b3 in -3.0..3.0f64,
    ) {
        let sys = mhd();
        let prim = PrimitiveMhd::from_array([rho, u, v, w, p, b1, b2, b3]);
        let back = sys.cons_to_prim(&sys.prim_to_cons(&prim).unwrap()).unwrap();
        let q = sys.prim_to_cons(&prim).unwrap();
        // Pressure is recovered by subtraction from the total energy.
        let p_scale = q[4].abs().max(1.0);
        for (i, (a, b)) in prim.to_array().iter().zip(back.to_array()).enumerate() {
            let tol = if i == 4 { 1e-14 * p_scale * 4.0 } else { 1e-14 * a.abs().max(1.0) };
            prop_assert!((a - b).abs() <= tol, "component {i}: {a} vs {b}");
        }
    }

    #[test]
    fn nonpositive_pressure_is_rejected(p in -5.0..=0.0f64) {
        let sys = mhd();
        let prim = PrimitiveMhd::from_array([1.0, 0.0, 0.0, 0.0, p, 1.0, 0.0, 0.0]);
        prop_assert!(sys.prim_to_cons(&prim).is_err());
    }
}
