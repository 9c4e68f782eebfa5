//! Husimi averages and multipole moments straight from the stars.
//!
//! `<n>` and `<n n>` follow from the diagram sums with one or two open dots;
//! the dipole and quadrupole are `(J+1)<n>` and
//! `(J+1)(J+3/2)(<n n> - 1/3)`.

use crate::diagrams::{alternating_norm, constellation_sums, factorial_ratio, DiagramSums};
use crate::{Constellation, Mat3, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_n: Vec3,
    pub mean_nn: Mat3,
    pub dipole: Vec3,
    pub quadrupole: Mat3,
}

fn signed(links: usize) -> f64 {
    if links.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn mean_n_from(two_j: u32, sums: &DiagramSums, norm: f64) -> Vec3 {
    let numerator: Vec3 = sums
        .dipole
        .iter()
        .enumerate()
        .skip(1)
        .map(|(links, d)| d * (signed(links) * factorial_ratio(two_j + 1 - links as u32, two_j)))
        .sum();
    let j = f64::from(two_j) / 2.0;
    numerator / (2.0 * (j + 1.0) * norm)
}

fn mean_nn_from(two_j: u32, sums: &DiagramSums, norm: f64) -> Mat3 {
    let numerator: Mat3 = sums
        .quadrupole
        .iter()
        .enumerate()
        .skip(1)
        .map(|(links, d)| d * (signed(links) * factorial_ratio(two_j + 2 - links as u32, two_j)))
        .sum();
    let j = f64::from(two_j) / 2.0;
    numerator / (2.0 * (j + 1.0) * (2.0 * j + 3.0) * norm)
}

/// Husimi average of the direction, `<n>`.
pub fn mean_n(constellation: &Constellation) -> Result<Vec3> {
    let two_j = constellation.spin().two_j();
    let sums = constellation_sums(constellation, 1)?;
    Ok(mean_n_from(two_j, &sums, alternating_norm(two_j, &sums.plain)))
}

/// Husimi average `<n (x) n>`; symmetric with unit trace.
pub fn mean_nn(constellation: &Constellation) -> Result<Mat3> {
    let two_j = constellation.spin().two_j();
    let sums = constellation_sums(constellation, 2)?;
    Ok(mean_nn_from(two_j, &sums, alternating_norm(two_j, &sums.plain)))
}

/// `<n>` and `<n n>` from a single table build.
pub(crate) fn both_means(constellation: &Constellation) -> Result<(Vec3, Mat3)> {
    let two_j = constellation.spin().two_j();
    let sums = constellation_sums(constellation, 2)?;
    let norm = alternating_norm(two_j, &sums.plain);
    Ok((mean_n_from(two_j, &sums, norm), mean_nn_from(two_j, &sums, norm)))
}

pub fn dipole_from_mean(j: f64, mean_n: &Vec3) -> Vec3 {
    mean_n * (j + 1.0)
}

pub fn quadrupole_from_mean(j: f64, mean_nn: &Mat3) -> Mat3 {
    let traceless = mean_nn - Mat3::identity() / 3.0;
    traceless * ((j + 1.0) * (j + 1.5))
}

/// `<J>` of the fiducial state.
pub fn dipole(constellation: &Constellation) -> Result<Vec3> {
    Ok(dipole_from_mean(constellation.spin().j(), &mean_n(constellation)?))
}

/// `<Q_ab>` with `Q_ab = (J_a J_b + J_b J_a)/2 - J(J+1)/3 delta_ab`.
pub fn quadrupole(constellation: &Constellation) -> Result<Mat3> {
    Ok(quadrupole_from_mean(constellation.spin().j(), &mean_nn(constellation)?))
}

pub fn moments(constellation: &Constellation) -> Result<MomentSet> {
    let j = constellation.spin().j();
    let (mean_n, mean_nn) = both_means(constellation)?;
    Ok(MomentSet {
        mean_n,
        mean_nn,
        dipole: dipole_from_mean(j, &mean_n),
        quadrupole: quadrupole_from_mean(j, &mean_nn),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageKind {
    N,
    NN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Average {
    N(Vec3),
    NN(Mat3),
}

/// Average over the state whose constellation lacks the stars in `remove`
/// (one or two indices).
pub fn reduced_average(constellation: &Constellation, remove: &[usize], what: AverageKind) -> Result<Average> {
    let reduced = constellation.without(remove)?;
    Ok(match what {
        AverageKind::N => Average::N(mean_n(&reduced)?),
        AverageKind::NN => Average::NN(mean_nn(&reduced)?),
    })
}
