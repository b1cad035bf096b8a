mod common;

use common::{mhd, random_pair, rng};
use es_riemann::ec_flux::{check_tadmor, ec_flux_burgers, ec_flux_mhd, log_mean};
use es_riemann::systems::{Burgers, EquationSystem};
use es_riemann::State;
use proptest::prelude::*;
use rand::Rng;

/// `|[[v]]| |f*| + |[[psi]]|`, the size of the terms that cancel in the
/// Tadmor residual.
fn tadmor_scale<S: EquationSystem<N>, const N: usize>(
    sys: &S,
    l: &State<N>,
    r: &State<N>,
    f: &State<N>,
) -> f64 {
    let el = sys.entropy_data(l).unwrap();
    let er = sys.entropy_data(r).unwrap();
    ((er.variables - el.variables).norm() * f.norm() + (er.potential - el.potential).abs()).max(1.0)
}

#[test]
fn mhd_flux_satisfies_tadmor_on_random_pairs() {
    let sys = mhd();
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (ql, qr) = random_pair(&mut r);
        let res = ec_flux_mhd(&sys, &ql, &qr).unwrap();
        let independent = check_tadmor(&sys, &ql, &qr, &res.flux).unwrap();
        assert_eq!(independent, res.tadmor_residual);
        worst = worst.max(independent.abs() / tadmor_scale(&sys, &ql, &qr, &res.flux));
    }
    assert!(worst <= 1e-11, "worst scaled residual {worst:e}");
}

#[test]
fn mhd_flux_is_symmetric() {
    let sys = mhd();
    let mut r = rng(12);
    for _ in 0..200 {
        let (ql, qr) = random_pair(&mut r);
        let a = ec_flux_mhd(&sys, &ql, &qr).unwrap().flux;
        let b = ec_flux_mhd(&sys, &qr, &ql).unwrap().flux;
        assert_eq!(a, b);
    }
}

#[test]
fn mhd_flux_is_consistent() {
    let sys = mhd();
    let mut r = rng(13);
    for _ in 0..200 {
        let (q, _) = random_pair(&mut r);
        let f = sys.physical_flux(&q).unwrap();
        let ec = ec_flux_mhd(&sys, &q, &q).unwrap().flux;
        assert!((ec - f).amax() <= 1e-13 * f.amax().max(1.0));
    }
}

#[test]
fn mhd_flux_is_smooth_near_equal_states() {
    // Exercises the log-mean series branch.
    let sys = mhd();
    let mut r = rng(14);
    for _ in 0..200 {
        let (ql, _) = random_pair(&mut r);
        let mut qr = ql;
        for i in [0, 1, 4, 6] {
            qr[i] *= 1.0 + r.gen_range(-1e-6..1e-6);
        }
        let res = ec_flux_mhd(&sys, &ql, &qr).unwrap();
        assert!(res.tadmor_residual.abs() <= 1e-11 * tadmor_scale(&sys, &ql, &qr, &res.flux));
    }
}

#[test]
fn burgers_flux_is_exactly_entropy_conservative() {
    let mut r = rng(15);
    for _ in 0..1000 {
        let ul = r.gen_range(-3.0..3.0);
        let ur = r.gen_range(-3.0..3.0);
        let f = State::<1>::new(ec_flux_burgers(ul, ur));
        let res = check_tadmor(&Burgers, &State::<1>::new(ul), &State::<1>::new(ur), &f).unwrap();
        assert!(res.abs() <= 1e-14, "{ul} {ur}: {res:e}");
    }
}

#[test]
fn central_flux_is_not_entropy_conservative() {
    let sys = mhd();
    let mut r = rng(16);
    let (ql, qr) = random_pair(&mut r);
    let central = (sys.physical_flux(&ql).unwrap() + sys.physical_flux(&qr).unwrap()) * 0.5;
    let res = check_tadmor(&sys, &ql, &qr, &central).unwrap();
    assert!(res.abs() > 1e-6 * tadmor_scale(&sys, &ql, &qr, &central));
}

proptest! {
    #[test]
    fn log_mean_lies_between_geometric_and_arithmetic(a in 1e-3..1e3f64, b in 1e-3..1e3f64) {
        let m = log_mean(a, b);
        let g = (a * b).sqrt();
        let ar = 0.5 * (a + b);
        prop_assert!(m >= g * (1.0 - 1e-14) && m <= ar * (1.0 + 1e-14));
        prop_assert_eq!(m, log_mean(b, a));
    }
}
