#![allow(dead_code)]

use majorana_core::{Constellation, Mat3, Spin, SpinState, UnitVector, Vec3};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_unit(rng: &mut impl Rng) -> UnitVector {
    loop {
        let v = Vec3::new(gaussian(rng), gaussian(rng), gaussian(rng));
        if v.norm() > 1e-6 {
            return UnitVector::normalize(v).unwrap();
        }
    }
}

pub fn random_constellation(rng: &mut impl Rng, two_j: u32) -> Constellation {
    Constellation::new((0..two_j).map(|_| random_unit(rng)).collect())
}

/// Stars pairwise at least `min_sep` apart (chordal).
pub fn separated_constellation(rng: &mut impl Rng, two_j: u32, min_sep: f64) -> Constellation {
    loop {
        let c = random_constellation(rng, two_j);
        if c.min_separation() > min_sep {
            return c;
        }
    }
}

pub fn random_state(rng: &mut impl Rng, two_j: u32) -> SpinState {
    let spin = Spin::from_two_j(two_j);
    let amps = (0..spin.dim()).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
    SpinState::new(spin, amps).unwrap()
}

pub fn random_rotation(rng: &mut impl Rng) -> Mat3 {
    let a = random_unit(rng).into_vec();
    let mut b = random_unit(rng).into_vec();
    b -= a * a.dot(&b);
    b /= b.norm();
    let c = a.cross(&b);
    Mat3::from_columns(&[a, b, c])
}

pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}
