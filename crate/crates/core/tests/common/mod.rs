#![allow(dead_code)]

use es_riemann::systems::{IdealMhd, MhdState, PrimitiveMhd};
use es_riemann::State;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GAMMA: f64 = 5.0 / 3.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mhd() -> IdealMhd {
    IdealMhd::new(GAMMA).unwrap()
}

pub fn random_primitive(rng: &mut impl Rng, b1: f64) -> PrimitiveMhd {
    PrimitiveMhd::new(
        rng.gen_range(0.1..5.0),
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ],
        rng.gen_range(0.1..5.0),
        [b1, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
    )
}

pub fn random_state(rng: &mut impl Rng) -> MhdState {
    let b1 = rng.gen_range(-2.0..2.0);
    mhd().prim_to_cons(&random_primitive(rng, b1)).unwrap()
}

/// Two states sharing `B1`.
pub fn random_pair(rng: &mut impl Rng) -> (MhdState, MhdState) {
    let sys = mhd();
    let b1 = rng.gen_range(-2.0..2.0);
    (
        sys.prim_to_cons(&random_primitive(rng, b1)).unwrap(),
        sys.prim_to_cons(&random_primitive(rng, b1)).unwrap(),
    )
}

/// Central-difference gradient of a scalar function of the state.
pub fn gradient<const N: usize>(f: impl Fn(&State<N>) -> f64, q: &State<N>) -> State<N> {
    let mut g = State::<N>::zeros();
    for i in 0..N {
        let h = 1e-6 * q[i].abs().max(1.0);
        let mut plus = *q;
        let mut minus = *q;
        plus[i] += h;
        minus[i] -= h;
        g[i] = (f(&plus) - f(&minus)) / (2.0 * h);
    }
    g
}
