//! Hamiltonian flow of the stars: f du/dt = grad H, with f the Berry
//! curvature of [`crate::geometry`].
//!
//! The Hamiltonian class is H = -b.J + sum_ab A_ab Q_ab + c with A symmetric
//! and traceless. H(U) comes from the dipole and quadrupole moments; its
//! gradient is taken by Richardson-extrapolated central differences.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, DVector};

use crate::geometry::{quantum_tensors, TangentFrame};
use crate::moments::{both_means, dipole_from_mean, quadrupole_from_mean};
use crate::oracle::{evolve_schrodinger, quadrupole_operator, spin_matrices};
use crate::stellar::pair_constellations;
use crate::{
    constellation_to_state, state_to_constellation, Constellation, Error, Mat3, OperatorMatrix, Result, Spin,
    UnitVector, Vec3,
};

/// Geodesic step for the gradient; the extrapolation also uses half of it.
pub const GRADIENT_STEP: f64 = 1e-5;
/// Largest tolerated 1-norm condition number of the symplectic form.
pub const MAX_CONDITION: f64 = 1e10;
/// Largest star displacement (radians) in one RK4 substep.
pub const MAX_SUBSTEP_ANGLE: f64 = 4e-3;
/// Stars closer than this (chordal) move as one in the reduced solve.
const CLUSTER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSpec {
    b_field: Vec3,
    quad: Mat3,
    constant: f64,
}

impl HamiltonianSpec {
    /// `quad` must be symmetric and traceless to 1e-12 (relative to its size).
    pub fn new(b_field: Vec3, quad: Mat3, constant: f64) -> Result<Self> {
        if !b_field.iter().chain(quad.iter()).all(|x| x.is_finite()) || !constant.is_finite() {
            return Err(Error::NonFinite("Hamiltonian"));
        }
        let scale = quad.amax().max(1.0);
        if (quad - quad.transpose()).amax() > 1e-12 * scale {
            return Err(Error::InvalidHamiltonian("quadrupole coupling must be symmetric"));
        }
        if quad.trace().abs() > 1e-12 * scale {
            return Err(Error::InvalidHamiltonian("quadrupole coupling must be traceless"));
        }
        Ok(HamiltonianSpec { b_field, quad, constant })
    }

    pub fn zeeman(b_field: Vec3) -> Self {
        HamiltonianSpec { b_field, quad: Mat3::zeros(), constant: 0.0 }
    }

    pub fn b_field(&self) -> &Vec3 {
        &self.b_field
    }

    pub fn quad(&self) -> &Mat3 {
        &self.quad
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Only the Zeeman term: the flow is a rigid rotation.
    pub fn is_zeeman(&self) -> bool {
        self.quad.iter().all(|&x| x == 0.0)
    }

    /// Dense matrix of the operator on the spin-`spin` space.
    pub fn matrix(&self, spin: Spin) -> OperatorMatrix {
        let s = spin_matrices(spin);
        let mut h = OperatorMatrix::identity(spin);
        h.entries *= nalgebra::Complex::new(self.constant, 0.0);
        for a in 0..3 {
            h.add_scaled(s.component(a), -self.b_field[a]);
            for b in 0..3 {
                if self.quad[(a, b)] != 0.0 {
                    h.add_scaled(&quadrupole_operator(spin, a, b), self.quad[(a, b)]);
                }
            }
        }
        h
    }

    /// Angular frequency scale: |b| for Zeeman, the spectral width otherwise.
    pub fn characteristic_period(&self, spin: Spin) -> f64 {
        let two_pi = 2.0 * core::f64::consts::PI;
        if self.is_zeeman() {
            return two_pi / self.b_field.norm();
        }
        let eig = self.matrix(spin).entries.symmetric_eigen().eigenvalues;
        two_pi / (eig.max() - eig.min())
    }
}

/// H(U) = <Psi_U|H|Psi_U> / <Psi_U|Psi_U> from the moments of the stars.
pub fn hamiltonian_expectation(constellation: &Constellation, h: &HamiltonianSpec) -> Result<f64> {
    let j = constellation.spin().j();
    let (mean_n, mean_nn) = both_means(constellation)?;
    let dipole = dipole_from_mean(j, &mean_n);
    let quadrupole = quadrupole_from_mean(j, &mean_nn);
    Ok(-h.b_field.dot(&dipole) + h.quad.component_mul(&quadrupole).sum() + h.constant)
}

fn moved(constellation: &Constellation, i: usize, e: &Vec3, t: f64) -> Constellation {
    let mut stars = constellation.stars().to_vec();
    stars[i] = stars[i].geodesic(e, t);
    Constellation::new(stars)
}

/// dH/du_i^alpha on `frame` by central differences of step `step` along
/// geodesics, without extrapolation.
pub fn grad_h_with_step(
    constellation: &Constellation,
    h: &HamiltonianSpec,
    frame: &TangentFrame,
    step: f64,
) -> Result<Vec<f64>> {
    if frame.len() != constellation.len() {
        return Err(Error::DimensionMismatch { expected: constellation.len(), found: frame.len() });
    }
    let mut out = Vec::with_capacity(2 * constellation.len());
    for i in 0..constellation.len() {
        for alpha in 0..2 {
            let e = frame.axis(i, alpha);
            let plus = hamiltonian_expectation(&moved(constellation, i, e, step), h)?;
            let minus = hamiltonian_expectation(&moved(constellation, i, e, -step), h)?;
            out.push((plus - minus) / (2.0 * step));
        }
    }
    Ok(out)
}

/// Richardson combination of central differences at `step` and `step / 2`.
pub fn grad_h_richardson(
    constellation: &Constellation,
    h: &HamiltonianSpec,
    frame: &TangentFrame,
    step: f64,
) -> Result<Vec<f64>> {
    let coarse = grad_h_with_step(constellation, h, frame, step)?;
    let fine = grad_h_with_step(constellation, h, frame, step / 2.0)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// dH/du_i^alpha on `frame`, indexed `2 i + alpha`, extrapolated from steps
/// [`GRADIENT_STEP`] and half of it.
pub fn grad_h(constellation: &Constellation, h: &HamiltonianSpec, frame: &TangentFrame) -> Result<Vec<f64>> {
    grad_h_richardson(constellation, h, frame, GRADIENT_STEP)
}

/// Which part of the curvature drives the stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    #[default]
    Full,
    /// Keep only the per-star 2x2 blocks of f, dropping the kinematic
    /// coupling between stars. Only useful as a comparison.
    DiagonalBlocks,
}

/// A sampled solution: `constellations[k]` at `times[k]`, with H along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub constellations: Vec<Constellation>,
    pub energies: Vec<f64>,
}

fn clusters(constellation: &Constellation) -> Vec<usize> {
    let stars = constellation.stars();
    let mut label: Vec<usize> = (0..stars.len()).collect();
    for i in 0..stars.len() {
        for j in 0..i {
            if stars[i].chordal(&stars[j]) < CLUSTER_TOLERANCE {
                label[i] = label[j];
                break;
            }
        }
    }
    label
}

fn condition_1(f: &DMatrix<f64>, inverse: &DMatrix<f64>) -> f64 {
    let norm1 = |m: &DMatrix<f64>| m.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max);
    norm1(f) * norm1(inverse)
}

/// Solves f v = rhs, refusing a near-singular f.
fn solve(f: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let lu = f.clone().lu();
    let Some(inverse) = lu.try_inverse() else {
        return Err(Error::SingularSymplecticForm { condition: f64::INFINITY });
    };
    let condition = condition_1(f, &inverse);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSymplecticForm { condition });
    }
    f.clone().lu().solve(rhs).ok_or(Error::SingularSymplecticForm { condition })
}

/// Star velocities as ambient tangent vectors.
///
/// Coincident stars make f singular. Under a pure Zeeman Hamiltonian the exact
/// flow is a rigid rotation, so coincident stars are then solved for as one
/// body (same velocity for every member); otherwise a singular f is an error.
pub fn star_velocities(constellation: &Constellation, h: &HamiltonianSpec, coupling: Coupling) -> Result<Vec<Vec3>> {
    let n = constellation.len();
    let frame = TangentFrame::spherical(constellation);
    let tensors = quantum_tensors(constellation, &frame)?;
    let mut f = tensors.f;
    if coupling == Coupling::DiagonalBlocks {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    f.view_mut((2 * i, 2 * j), (2, 2)).fill(0.0);
                }
            }
        }
    }
    let grad = DVector::from_vec(grad_h(constellation, h, &frame)?);
    let components = match solve(&f, &grad) {
        Ok(v) => v,
        Err(err) => {
            let label = clusters(constellation);
            let mut reps: Vec<usize> = label.clone();
            reps.sort_unstable();
            reps.dedup();
            if !h.is_zeeman() || reps.len() == n {
                return Err(err);
            }
            // P maps the 2 components of each cluster onto all its members
            let mut p = DMatrix::zeros(2 * n, 2 * reps.len());
            for (i, l) in label.iter().enumerate() {
                let c = reps.iter().position(|r| r == l).unwrap_or(0);
                p[(2 * i, 2 * c)] = 1.0;
                p[(2 * i + 1, 2 * c + 1)] = 1.0;
            }
            let reduced = solve(&(p.transpose() * &f * &p), &(p.transpose() * &grad))?;
            p * reduced
        }
    };
    Ok((0..n).map(|i| frame.axis(i, 0) * components[2 * i] + frame.axis(i, 1) * components[2 * i + 1]).collect())
}

fn advance(constellation: &Constellation, velocities: &[Vec3], dt: f64) -> Result<Constellation> {
    let stars = constellation
        .stars()
        .iter()
        .zip(velocities)
        .map(|(u, v)| UnitVector::normalize(u.as_vec() + v * dt))
        .collect::<Result<Vec<_>>>()?;
    Ok(Constellation::new(stars))
}

fn rk4_step(
    current: &Constellation,
    k1: Vec<Vec3>,
    h: &HamiltonianSpec,
    dt: f64,
    coupling: Coupling,
) -> Result<Constellation> {
    let k2 = star_velocities(&advance(current, &k1, dt / 2.0)?, h, coupling)?;
    let k3 = star_velocities(&advance(current, &k2, dt / 2.0)?, h, coupling)?;
    let k4 = star_velocities(&advance(current, &k3, dt)?, h, coupling)?;
    let combined: Vec<Vec3> = (0..current.len()).map(|i| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0).collect();
    advance(current, &combined, dt)
}

/// Classical RK4 with every stage projected back onto the unit spheres.
///
/// Each output step is split into equal substeps so that no star turns by
/// more than [`MAX_SUBSTEP_ANGLE`] per substep.
pub fn evolve_stars_with(
    initial: &Constellation,
    h: &HamiltonianSpec,
    dt: f64,
    steps: usize,
    coupling: Coupling,
) -> Result<Trajectory> {
    if !dt.is_finite() {
        return Err(Error::NonFinite("time step"));
    }
    let mut times = vec![0.0];
    let mut constellations = vec![initial.clone()];
    let mut energies = vec![hamiltonian_expectation(initial, h)?];
    if initial.is_empty() {
        for k in 1..=steps {
            times.push(k as f64 * dt);
            constellations.push(initial.clone());
            energies.push(energies[0]);
        }
        return Ok(Trajectory { times, constellations, energies });
    }
    let mut current = initial.clone();
    for k in 1..=steps {
        let k1 = star_velocities(&current, h, coupling)?;
        let fastest = k1.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let substeps = ((fastest * dt.abs() / MAX_SUBSTEP_ANGLE).ceil() as usize).max(1);
        let tau = dt / substeps as f64;
        current = rk4_step(&current, k1, h, tau, coupling)?;
        for _ in 1..substeps {
            let k1 = star_velocities(&current, h, coupling)?;
            current = rk4_step(&current, k1, h, tau, coupling)?;
        }
        times.push(k as f64 * dt);
        energies.push(hamiltonian_expectation(&current, h)?);
        constellations.push(current.clone());
    }
    Ok(Trajectory { times, constellations, energies })
}

/// Integrates f du/dt = grad H for `steps` steps of `dt`.
pub fn evolve_stars(initial: &Constellation, h: &HamiltonianSpec, dt: f64, steps: usize) -> Result<Trajectory> {
    evolve_stars_with(initial, h, dt, steps, Coupling::Full)
}

/// dn/dt = n x b by RK4, without renormalization. Starts with `n0`.
pub fn landau_lifshitz_reference(n0: &UnitVector, b_field: &Vec3, dt: f64, steps: usize) -> Vec<Vec3> {
    let rhs = |n: &Vec3| n.cross(b_field);
    let mut n = n0.into_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(n);
    for _ in 0..steps {
        let k1 = rhs(&n);
        let k2 = rhs(&(n + k1 * (dt / 2.0)));
        let k3 = rhs(&(n + k2 * (dt / 2.0)));
        let k4 = rhs(&(n + k3 * dt));
        n += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
        out.push(n);
    }
    out
}

/// Star trajectory read off the exact Schrodinger evolution.
///
/// Stars are followed from frame to frame by the bottleneck assignment; a
/// step where the best displacement reaches half the smallest star
/// separation cannot be attributed reliably and is reported as an error.
pub fn oracle_trajectory(initial: &Constellation, h: &HamiltonianSpec, dt: f64, steps: usize) -> Result<Trajectory> {
    let spin = initial.spin();
    let matrix = h.matrix(spin);
    let states = evolve_schrodinger(&constellation_to_state(initial), &matrix, dt, steps)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut constellations: Vec<Constellation> = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    for (k, state) in states.iter().enumerate() {
        let tracked = if k == 0 {
            initial.clone()
        } else {
            let prev = &constellations[k - 1];
            let next = state_to_constellation(state)?;
            let (displacement, perm) = pair_constellations(prev, &next)?;
            if prev.len() > 1 && displacement >= 0.5 * prev.min_separation() {
                return Err(Error::TrackingAmbiguous { step: k - 1 });
            }
            Constellation::new(perm.iter().map(|&p| next.stars()[p]).collect())
        };
        times.push(k as f64 * dt);
        energies.push(state.expectation(&matrix).re);
        constellations.push(tracked);
    }
    Ok(Trajectory { times, constellations, energies })
}

/// Largest chordal distance between corresponding stars of two trajectories
/// sampled at the same times.
pub fn max_star_displacement(a: &Trajectory, b: &Trajectory) -> f64 {
    a.constellations
        .iter()
        .zip(&b.constellations)
        .flat_map(|(x, y)| x.stars().iter().zip(y.stars()).map(|(u, v)| u.chordal(v)))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn spin_half_energy_and_gradient() {
        let b = 1.3;
        let h = HamiltonianSpec::zeeman(Vec3::new(0.0, 0.0, b));
        let u = UnitVector::from_angles(0.8, 0.1);
        let c = Constellation::new(vec![u]);
        assert!((hamiltonian_expectation(&c, &h).unwrap() - b * u.z() / 2.0).abs() < 1e-15);
        let g = grad_h(&c, &h, &TangentFrame::spherical(&c)).unwrap();
        assert!((g[0].hypot(g[1]) - b / 2.0 * 0.8f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn validation() {
        let asym = Mat3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(HamiltonianSpec::new(Vec3::zeros(), asym, 0.0).is_err());
        assert!(HamiltonianSpec::new(Vec3::zeros(), Mat3::identity(), 0.0).is_err());
        assert!(HamiltonianSpec::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -2.0)), 0.0).is_ok());
    }

    #[test]
    fn equator_precession() {
        let b = 2.0;
        let h = HamiltonianSpec::zeeman(Vec3::new(0.0, 0.0, b));
        let c = Constellation::new(vec![UnitVector::x_axis()]);
        let steps = 1000;
        let t = evolve_stars(&c, &h, 2.0 * PI / b / steps as f64, steps).unwrap();
        let quarter = &t.constellations[steps / 4].stars()[0];
        // phi decreases at rate b
        assert!((quarter.as_vec() - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-8, "{quarter:?}");
        let end = t.constellations[steps].stars()[0].chordal(&UnitVector::x_axis());
        assert!(end < 1e-8, "{end}");
    }

    #[test]
    fn coincident_stars_need_a_rigid_flow() {
        let c = Constellation::coherent(Spin::from_two_j(2), &UnitVector::from_angles(1.0, 0.5));
        let quad = Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 0.0));
        let h = HamiltonianSpec::new(Vec3::zeros(), quad, 0.0).unwrap();
        assert!(matches!(star_velocities(&c, &h, Coupling::Full), Err(Error::SingularSymplecticForm { .. })));
        assert!(star_velocities(&c, &HamiltonianSpec::zeeman(Vec3::x()), Coupling::Full).is_ok());
    }
}
