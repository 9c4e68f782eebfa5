//! Seeded random inputs for the self-test.

use majorana_core::{Complex64, Constellation, HamiltonianSpec, Mat3, Spin, SpinState, UnitVector, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut impl Rng) -> UnitVector {
    let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
    UnitVector::normalize(Vec3::new(x, y, z)).expect("sampled on the sphere")
}

pub fn constellation(rng: &mut impl Rng, two_j: u32) -> Constellation {
    Constellation::new((0..two_j).map(|_| unit(rng)).collect())
}

/// Stars pairwise more than `min_sep` apart and, if `below` is set, all with
/// z below it.
pub fn spread_constellation(rng: &mut impl Rng, two_j: u32, min_sep: f64, below: Option<f64>) -> Constellation {
    loop {
        let c = constellation(rng, two_j);
        let low = below.is_none_or(|zmax| c.stars().iter().all(|u| u.z() < zmax));
        if low && (two_j < 2 || c.min_separation() > min_sep) {
            return c;
        }
    }
}

pub fn state(rng: &mut impl Rng, two_j: u32) -> SpinState {
    let spin = Spin::from_two_j(two_j);
    let amps =
        (0..spin.dim()).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    SpinState::new(spin, amps).expect("dimension matches")
}

pub fn traceless_symmetric(rng: &mut impl Rng) -> Mat3 {
    let a = Mat3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    let s = (a + a.transpose()) / 2.0;
    s - Mat3::identity() * (s.trace() / 3.0)
}

pub fn zeeman(rng: &mut impl Rng) -> HamiltonianSpec {
    HamiltonianSpec::zeeman(unit(rng).into_vec() * rng.gen_range(0.5..2.0))
}

/// Quadrupolar coupling plus a weaker field and an offset.
pub fn quadrupolar(rng: &mut impl Rng) -> HamiltonianSpec {
    let b = unit(rng).into_vec() * rng.gen_range(0.1..0.6);
    HamiltonianSpec::new(b, traceless_symmetric(rng), rng.gen_range(-1.0..1.0)).expect("valid by construction")
}

/// A rotation matrix from two random directions.
pub fn rotation(rng: &mut impl Rng) -> Mat3 {
    let a = unit(rng).into_vec();
    let mut b = unit(rng).into_vec();
    b -= a * a.dot(&b);
    let b = b.normalize();
    Mat3::from_columns(&[a, b, a.cross(&b)])
}
