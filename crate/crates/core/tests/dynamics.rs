mod common;

use common::*;
use majorana_core::dynamics::{
    evolve_stars_with, grad_h_richardson, landau_lifshitz_reference, max_star_displacement, oracle_trajectory, Coupling,
};
use majorana_core::{
    constellation_to_state, evolve_stars, grad_h, hamiltonian_expectation, Constellation, Error, HamiltonianSpec, Mat3,
    Spin, TangentFrame, Trajectory, UnitVector, Vec3,
};
use rand::Rng;

fn random_quad(rng: &mut impl Rng) -> Mat3 {
    let mut a = Mat3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    a = (a + a.transpose()) / 2.0;
    a - Mat3::identity() * (a.trace() / 3.0)
}

fn random_hamiltonian(rng: &mut impl Rng, zeeman_only: bool) -> HamiltonianSpec {
    let b = random_unit(rng).into_vec() * rng.gen_range(0.5..2.0);
    if zeeman_only {
        HamiltonianSpec::zeeman(b)
    } else {
        HamiltonianSpec::new(b * 0.3, random_quad(rng), rng.gen_range(-1.0..1.0)).unwrap()
    }
}

#[test]
fn expectation_matches_dense() {
    let mut rng = rng(40);
    for two_j in 0..=6 {
        for _ in 0..10 {
            let c = random_constellation(&mut rng, two_j);
            let h = random_hamiltonian(&mut rng, false);
            let psi = constellation_to_state(&c);
            let dense = psi.expectation(&h.matrix(c.spin())).re;
            let e = hamiltonian_expectation(&c, &h).unwrap();
            assert!((e - dense).abs() < 1e-9, "2j={two_j} {e} {dense}");
        }
    }
}

#[test]
fn spin_one_antipodal_quadrupole() {
    let quad = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -2.0));
    let h = HamiltonianSpec::new(Vec3::zeros(), quad, 0.0).unwrap();
    let c = Constellation::new(vec![UnitVector::z_axis(), UnitVector::z_axis().antipode()]);
    // |1,0>: <Q_xx> = <Q_yy> = 1/3, <Q_zz> = -2/3
    assert!((hamiltonian_expectation(&c, &h).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn gradient_is_step_independent() {
    let mut rng = rng(41);
    for two_j in 1..=4 {
        let c = random_constellation(&mut rng, two_j);
        let h = random_hamiltonian(&mut rng, false);
        let frame = TangentFrame::spherical(&c);
        let g = grad_h(&c, &h, &frame).unwrap();
        let other = grad_h_richardson(&c, &h, &frame, 3e-4).unwrap();
        for (a, b) in g.iter().zip(&other) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }
}

#[test]
fn invariant_hamiltonians_have_no_gradient() {
    let mut rng = rng(42);
    let c = random_constellation(&mut rng, 4);
    let frame = TangentFrame::spherical(&c);
    let h = HamiltonianSpec::new(Vec3::zeros(), Mat3::zeros(), 3.5).unwrap();
    assert!(grad_h(&c, &h, &frame).unwrap().iter().all(|x| x.abs() < 1e-10));
    let t = evolve_stars(&c, &h, 0.1, 5).unwrap();
    // finite-difference round-off only
    let still = Trajectory { times: t.times.clone(), constellations: vec![c.clone(); 6], energies: t.energies.clone() };
    assert!(max_star_displacement(&t, &still) < 1e-9);
    assert!(t.energies.iter().all(|&e| (e - 3.5).abs() < 1e-12));
}

fn oracle_match(two_j: u32, zeeman_only: bool, cases: usize, tol: f64, seed: u64) {
    let mut rng = rng(seed);
    let mut done = 0;
    while done < cases {
        let c = separated_constellation(&mut rng, two_j, 0.3);
        let h = random_hamiltonian(&mut rng, zeeman_only);
        let period = h.characteristic_period(c.spin());
        let steps = 1000;
        let dt = period / steps as f64;
        let oracle = match oracle_trajectory(&c, &h, dt, steps) {
            Ok(t) => t,
            Err(Error::TrackingAmbiguous { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let stars = match evolve_stars(&c, &h, dt, steps) {
            Ok(t) => t,
            Err(Error::SingularSymplecticForm { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let d = max_star_displacement(&stars, &oracle);
        assert!(d < tol, "2j={two_j}: {d}");
        done += 1;
    }
}

#[test]
fn zeeman_matches_oracle() {
    for two_j in 1..=4 {
        oracle_match(two_j, true, 5, 1e-6, 43 + u64::from(two_j));
    }
}

#[test]
fn quadrupolar_matches_oracle() {
    for two_j in 2..=3 {
        oracle_match(two_j, false, 5, 1e-5, 50 + u64::from(two_j));
    }
}

#[test]
fn energy_is_conserved() {
    let mut rng = rng(60);
    for two_j in [2, 3] {
        let c = separated_constellation(&mut rng, two_j, 0.3);
        let h = random_hamiltonian(&mut rng, false);
        let period = h.characteristic_period(c.spin());
        let t = evolve_stars(&c, &h, period / 1000.0, 10_000).unwrap();
        let e0 = t.energies[0];
        let drift = t.energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8 * e0.abs().max(1.0), "{drift}");
    }
}

#[test]
fn coherent_states_stay_coherent() {
    let mut rng = rng(61);
    for two_j in 2..=4 {
        let spin = Spin::from_two_j(two_j);
        let n0 = random_unit(&mut rng);
        let b = random_unit(&mut rng).into_vec() * 1.5;
        let h = HamiltonianSpec::zeeman(b);
        let period = h.characteristic_period(spin);
        let steps = 1000;
        let dt = period / steps as f64;
        let t = evolve_stars(&Constellation::coherent(spin, &n0), &h, dt, steps).unwrap();
        let ll = landau_lifshitz_reference(&n0, &b, dt, steps);
        for (c, n) in t.constellations.iter().zip(&ll) {
            let spread = c.stars().iter().map(|u| u.chordal(&c.stars()[0])).fold(0.0, f64::max);
            assert!(spread < 1e-8);
            let direction = majorana_core::dipole(c).unwrap() / spin.j();
            assert!((direction - n).norm() < 1e-6);
        }
    }
}

#[test]
fn landau_lifshitz_properties() {
    let n0 = UnitVector::x_axis();
    let b = Vec3::new(0.0, 0.0, 2.0);
    let steps = 1000;
    let period = std::f64::consts::PI;
    let ns = landau_lifshitz_reference(&n0, &b, period / steps as f64, steps);
    assert!((ns[steps] - n0.as_vec()).norm() < 1e-9);
    assert!(ns.iter().all(|n| (n.norm() - 1.0).abs() < 1e-12));
    let still = landau_lifshitz_reference(&UnitVector::z_axis(), &b, 0.1, 50);
    assert!(still.iter().all(|n| (n - Vec3::z()).norm() < 1e-15));
}

#[test]
fn kinematic_coupling_matters() {
    let mut rng = rng(62);
    let c = separated_constellation(&mut rng, 2, 0.5);
    let h = HamiltonianSpec::new(Vec3::zeros(), random_quad(&mut rng), 0.0).unwrap();
    let period = h.characteristic_period(c.spin());
    let steps = 1000;
    let dt = period / steps as f64;
    let oracle = oracle_trajectory(&c, &h, dt, steps).unwrap();
    let full = evolve_stars_with(&c, &h, dt, steps, Coupling::Full).unwrap();
    let truncated = evolve_stars_with(&c, &h, dt, steps, Coupling::DiagonalBlocks).unwrap();
    assert!(max_star_displacement(&full, &oracle) < 1e-6);
    assert!(max_star_displacement(&truncated, &oracle) > 1e-3);
}
