//! The acceptance suite: one verdict per criterion, each checked against an
//! independent reference (dense Hilbert-space algebra, quadrature, exhaustive
//! enumeration or finite differences).
//!
//! `Config::quick` shrinks sample counts and spins for a fast smoke run; the
//! full configuration uses the stated sizes.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use majorana_core::dynamics::{landau_lifshitz_reference, max_star_displacement, oracle_trajectory};
use majorana_core::geometry::berry_connection_vectors;
use majorana_core::oracle::{quadrupole_expectation, spin_expectation, wrap_phase};
use majorana_core::quadrature::SphereQuadrature;
use majorana_core::{
    constellation_to_state, dipole, evolve_stars, free_energy, fubini_study_distance, geometric_phase, husimi,
    matching_sums, mean_n, mean_nn, moments, partition_function, quadrupole, quantum_tensors, Constellation, Error,
    HamiltonianSpec, Mat3, MatchingSums, PhaseMethod, Result, Spin, StarPath, TangentFrame, UnitVector, Vec3,
    WeightedGraph,
};
use rand::Rng;

use crate::sample::{self, SampleRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub full: bool,
}

impl Config {
    pub fn full(seed: u64) -> Self {
        Config { seed, full: true }
    }

    pub fn quick(seed: u64) -> Self {
        Config { seed, full: false }
    }

    fn pick<T>(&self, full: T, quick: T) -> T {
        if self.full {
            full
        } else {
            quick
        }
    }

    fn rng(&self, criterion: u64) -> SampleRng {
        sample::rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(criterion))
    }
}

/// Verdict for one criterion; `checks` lists every measured quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub what: &'static str,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn below(what: &'static str, value: f64, bound: f64) -> Self {
        Check { what, value, bound, passed: value < bound }
    }

    fn failed(what: &'static str, err: &Error) -> Self {
        eprintln!("{what}: {err}");
        Check { what, value: f64::NAN, bound: 0.0, passed: false }
    }
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{}] {}:", self.id, self.name)?;
        for (k, c) in self.checks.iter().enumerate() {
            let sep = if k == 0 { " " } else { "; " };
            write!(f, "{sep}{} {:.2e} (< {:.0e})", c.what, c.value, c.bound)?;
        }
        Ok(())
    }
}

fn run(id: u8, name: &'static str, body: impl FnOnce(&mut Vec<Check>) -> Result<()>) -> Outcome {
    let mut checks = Vec::new();
    if let Err(err) = body(&mut checks) {
        checks.push(Check::failed("aborted", &err));
    }
    Outcome { id, name, checks }
}

pub fn run_all(config: &Config) -> Vec<Outcome> {
    vec![
        round_trip(config),
        partition_function_oracle(config),
        moment_oracle(config),
        star_addition(config),
        geometry(config),
        geometric_phases(config),
        dynamics(config),
        combinatorics(config),
    ]
}

fn max_abs(m: &Mat3) -> f64 {
    m.amax()
}

/// 1. state -> constellation -> state keeps the ray.
pub fn round_trip(config: &Config) -> Outcome {
    run(1, "round-trip representation", |checks| {
        let mut rng = config.rng(1);
        let count = config.pick(500, 60);
        let max_two_j = config.pick(12, 4);
        let mut worst = 0.0f64;
        for k in 0..count {
            let two_j = 1 + (k % max_two_j) as u32;
            let psi = sample::state(&mut rng, two_j);
            let back = constellation_to_state(&majorana_core::state_to_constellation(&psi)?);
            worst = worst.max(1.0 - psi.fidelity(&back));
        }
        checks.push(Check::below("1 - fidelity", worst, 1e-10));
        Ok(())
    })
}

/// 2. Diagram partition function against the norm and the Husimi integral.
pub fn partition_function_oracle(config: &Config) -> Outcome {
    run(2, "partition function vs Hilbert space", |checks| {
        let mut rng = config.rng(2);
        let max_two_j = config.pick(10, 4);
        let mut worst = 0.0f64;
        for two_j in 0..=max_two_j {
            for _ in 0..config.pick(20, 5) {
                let c = sample::constellation(&mut rng, two_j);
                let dense = constellation_to_state(&c).norm_sqr() / f64::from(two_j + 1);
                worst = worst.max((partition_function(&c)? / dense - 1.0).abs());
            }
        }
        checks.push(Check::below("rel. error vs norm", worst, 1e-10));

        let quad = SphereQuadrature::standard();
        let mut worst = 0.0f64;
        for two_j in 0..=config.pick(6, 4) {
            let c = sample::constellation(&mut rng, two_j);
            let psi = constellation_to_state(&c);
            let integral = quad.integrate(|n| husimi(&psi, n)) / (4.0 * PI);
            worst = worst.max((integral - partition_function(&c)?).abs());
        }
        checks.push(Check::below("error vs Husimi quadrature", worst, 1e-8));
        Ok(())
    })
}

fn spin_one_closed_forms(c: &Constellation) -> (Vec3, Mat3) {
    let (u1, u2) = (c.stars()[0].into_vec(), c.stars()[1].into_vec());
    let d12 = (1.0 - u1.dot(&u2)) / 2.0;
    let dip = -(u1 + u2) / (2.0 - d12);
    let sym = (u1 * u2.transpose() + u2 * u1.transpose()) / 2.0;
    let quad = (sym - Mat3::identity() * (u1.dot(&u2) / 3.0)) / (2.0 - d12);
    (dip, quad)
}

/// 3. Dipole and quadrupole from the diagrams against dense expectations.
pub fn moment_oracle(config: &Config) -> Outcome {
    run(3, "multipole moments vs dense oracle", |checks| {
        let mut rng = config.rng(3);
        let max_two_j = config.pick(8, 4);
        let (mut worst_d, mut worst_q) = (0.0f64, 0.0f64);
        for k in 0..config.pick(200, 40) {
            let two_j = (k % (max_two_j as usize + 1)) as u32;
            let c = sample::constellation(&mut rng, two_j);
            let psi = constellation_to_state(&c);
            let m = moments(&c)?;
            worst_d = worst_d.max((m.dipole - spin_expectation(&psi)).amax());
            worst_q = worst_q.max(max_abs(&(m.quadrupole - quadrupole_expectation(&psi))));
        }
        checks.push(Check::below("dipole error", worst_d, 1e-9));
        checks.push(Check::below("quadrupole error", worst_q, 1e-9));

        let mut worst = 0.0f64;
        for _ in 0..config.pick(50, 10) {
            let c = sample::constellation(&mut rng, 2);
            let (dip, quad) = spin_one_closed_forms(&c);
            let psi = constellation_to_state(&c);
            worst = worst
                .max((dipole(&c)? - dip).amax())
                .max(max_abs(&(quadrupole(&c)? - quad)))
                .max((spin_expectation(&psi) - dip).amax())
                .max(max_abs(&(quadrupole_expectation(&psi) - quad)));
        }
        checks.push(Check::below("spin-1 closed forms", worst, 1e-12));
        Ok(())
    })
}

/// 4. Free-energy change on adding one or two stars.
pub fn star_addition(config: &Config) -> Outcome {
    run(4, "star-addition identities", |checks| {
        let mut rng = config.rng(4);
        let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
        for k in 0..config.pick(100, 30) {
            let two_j = (k % 7) as u32;
            let c = sample::constellation(&mut rng, two_j);
            let (u1, u2) = (sample::unit(&mut rng), sample::unit(&mut rng));
            let f = free_energy(&c)?;
            let (m, mm) = (mean_n(&c)?, mean_nn(&c)?);
            let one = c.with_star(u1);
            let predicted = f + std::f64::consts::LN_2 - (1.0 - u1.as_vec().dot(&m)).ln();
            worst1 = worst1.max((free_energy(&one)? - predicted).abs());
            let two = one.with_star(u2);
            let inner = 1.0 - (u1.as_vec() + u2.as_vec()).dot(&m) + u1.as_vec().dot(&(mm * u2.as_vec()));
            let predicted = f + 2.0 * std::f64::consts::LN_2 - inner.ln();
            worst2 = worst2.max((free_energy(&two)? - predicted).abs());
        }
        checks.push(Check::below("one star", worst1, 1e-10));
        checks.push(Check::below("two stars", worst2, 1e-10));
        Ok(())
    })
}

fn moved_along(c: &Constellation, frame: &TangentFrame, delta: &[f64]) -> Constellation {
    let stars = c
        .stars()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let v = frame.axis(i, 0) * delta[2 * i] + frame.axis(i, 1) * delta[2 * i + 1];
            let len = v.norm();
            if len == 0.0 {
                *u
            } else {
                u.geodesic(&(v / len), len)
            }
        })
        .collect();
    Constellation::new(stars)
}

/// Connection components in the chart x -> normalize(u_i + x_i1 e_i1 + x_i2 e_i2).
fn chart_connection(c: &Constellation, frame: &TangentFrame, x: &[f64]) -> Result<Vec<f64>> {
    let mut stars = Vec::with_capacity(c.len());
    let mut raw = Vec::with_capacity(c.len());
    for (i, u) in c.stars().iter().enumerate() {
        let v = u.as_vec() + frame.axis(i, 0) * x[2 * i] + frame.axis(i, 1) * x[2 * i + 1];
        raw.push(v);
        stars.push(UnitVector::normalize(v)?);
    }
    let a = berry_connection_vectors(&Constellation::new(stars.clone()))?;
    let mut out = Vec::with_capacity(2 * c.len());
    for i in 0..c.len() {
        let n = stars[i].as_vec();
        for alpha in 0..2 {
            let e = frame.axis(i, alpha);
            let du = (e - n * n.dot(e)) / raw[i].norm();
            out.push(a[i].dot(&du));
        }
    }
    Ok(out)
}

/// Largest deviation of f from the finite-difference exterior derivative of
/// the connection, over every (i, alpha, j, beta).
pub fn curl_deviation(c: &Constellation) -> Result<f64> {
    let frame = TangentFrame::spherical(c);
    let t = quantum_tensors(c, &frame)?;
    let dim = 2 * c.len();
    let h = 1e-5;
    // d[p][q] = d A_q / d x_p
    let mut d = vec![vec![0.0; dim]; dim];
    for p in 0..dim {
        let mut x = vec![0.0; dim];
        x[p] = h;
        let plus = chart_connection(c, &frame, &x)?;
        x[p] = -h;
        let minus = chart_connection(c, &frame, &x)?;
        for q in 0..dim {
            d[p][q] = (plus[q] - minus[q]) / (2.0 * h);
        }
    }
    let mut worst = 0.0f64;
    for p in 0..dim {
        for q in 0..dim {
            worst = worst.max((d[p][q] - d[q][p] - t.f[(p, q)]).abs());
        }
    }
    Ok(worst)
}

/// 5. Metric and curvature: Kahler relations, distance expansion, curl, flux.
pub fn geometry(config: &Config) -> Outcome {
    run(5, "quantum geometric tensor", |checks| {
        let mut rng = config.rng(5);
        let mut worst = 0.0f64;
        for k in 0..config.pick(200, 40) {
            let two_j = 1 + (k % 6) as u32;
            let c = sample::constellation(&mut rng, two_j);
            let t = quantum_tensors(&c, &TangentFrame::spherical(&c))?;
            let sym = (&t.g - t.g.transpose()).amax().max((&t.f + t.f.transpose()).amax());
            worst = worst.max(t.kahler_residual()).max(sym);
        }
        checks.push(Check::below("Kahler identities", worst, 1e-9));

        let mut worst = 0.0f64;
        for k in 0..config.pick(30, 8) {
            let two_j = 1 + (k % 6) as u32;
            let c = sample::constellation(&mut rng, two_j);
            let frame = TangentFrame::spherical(&c);
            let t = quantum_tensors(&c, &frame)?;
            let delta: Vec<f64> = (0..2 * c.len()).map(|_| rng.gen_range(-1.0..1.0) * 1e-3).collect();
            let d = fubini_study_distance(
                &constellation_to_state(&c),
                &constellation_to_state(&moved_along(&c, &frame, &delta)),
            )?;
            let quad: f64 = (0..delta.len())
                .flat_map(|p| (0..delta.len()).map(move |q| (p, q)))
                .map(|(p, q)| delta[p] * t.g[(p, q)] * delta[q])
                .sum();
            worst = worst.max((d * d / quad - 1.0).abs());
        }
        checks.push(Check::below("metric vs FS expansion (rel.)", worst, 1e-2));

        let mut worst = 0.0f64;
        for k in 0..config.pick(12, 4) {
            let two_j = 1 + (k % 4) as u32;
            let c = sample::spread_constellation(&mut rng, two_j, 0.1, Some(0.9));
            worst = worst.max(curl_deviation(&c)?);
        }
        checks.push(Check::below("curvature vs curl of connection", worst, 1e-5));

        let (nt, np) = (400, 4);
        let mut flux = 0.0;
        for a in 0..nt {
            let theta = PI * (a as f64 + 0.5) / nt as f64;
            for b in 0..np {
                let c = Constellation::new(vec![UnitVector::from_angles(theta, 2.0 * PI * b as f64 / np as f64)]);
                let t = quantum_tensors(&c, &TangentFrame::spherical(&c))?;
                flux += t.f[(0, 1)] * theta.sin() * (PI / nt as f64) * (2.0 * PI / np as f64);
            }
        }
        checks.push(Check::below("spin-1/2 flux - 2 pi", (flux - 2.0 * PI).abs(), 1e-3));
        Ok(())
    })
}

fn coherent_latitude(spin: Spin, theta: f64, samples: usize) -> Result<StarPath> {
    let loop_: Vec<Constellation> = (0..samples)
        .map(|k| Constellation::coherent(spin, &UnitVector::from_angles(theta, 2.0 * PI * k as f64 / samples as f64)))
        .collect();
    StarPath::new(loop_, true)
}

/// Every star runs its own small closed orbit around a base point below the
/// +z string; stars stay apart.
pub fn random_smooth_loop(rng: &mut impl Rng, two_j: u32, samples: usize) -> Result<StarPath> {
    loop {
        let mut orbits = Vec::new();
        for _ in 0..two_j {
            let base = loop {
                let u = sample::unit(rng);
                if u.z() < 0.3 {
                    break u;
                }
            };
            let frame = TangentFrame::spherical(&Constellation::new(vec![base]));
            let (p, q) = (*frame.axis(0, 0), *frame.axis(0, 1));
            let radius = rng.gen_range(0.1..0.6);
            let wobble = rng.gen_range(0.0..0.3) * radius;
            let turns = rng.gen_range(1..=2) as f64;
            let phase = rng.gen_range(0.0..2.0 * PI);
            orbits.push((base, p, q, radius, wobble, turns, phase));
        }
        let samples: Vec<Constellation> = (0..samples)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / samples as f64;
                let stars = orbits
                    .iter()
                    .map(|&(base, p, q, r, w, turns, phase)| {
                        let s = turns * t + phase;
                        let offset = p * (r * s.cos() + w * (2.0 * t).sin()) + q * (r * s.sin());
                        UnitVector::normalize(base.as_vec() + offset).expect("offset is bounded")
                    })
                    .collect();
                Constellation::new(stars)
            })
            .collect();
        let clear =
            samples.iter().all(|c| c.stars().iter().all(|u| u.z() < 0.95) && (c.len() < 2 || c.min_separation() > 0.1));
        if clear {
            return StarPath::new(samples, true);
        }
    }
}

/// 6. Berry phase of coherent circuits and agreement of the two methods.
pub fn geometric_phases(config: &Config) -> Outcome {
    run(6, "geometric phase", |checks| {
        let theta: f64 = 2.0;
        let omega = 2.0 * PI * (1.0 - theta.cos());
        let (mut worst, mut worst_ratio) = (0.0f64, 0.0f64);
        for two_j in [1, 2, 4] {
            let spin = Spin::from_two_j(two_j);
            let expected = -spin.j() * omega;
            let coarse =
                wrap_phase(geometric_phase(&coherent_latitude(spin, theta, 2000)?, PhaseMethod::Holonomy)? - expected)
                    .abs();
            let fine =
                wrap_phase(geometric_phase(&coherent_latitude(spin, theta, 4000)?, PhaseMethod::Holonomy)? - expected)
                    .abs();
            worst = worst.max(coarse);
            worst_ratio = worst_ratio.max(fine / coarse);
        }
        checks.push(Check::below("coherent circuit vs -J Omega", worst, 1e-4));
        checks.push(Check::below("error ratio on refinement", worst_ratio, 0.5 + 1e-9));

        let mut rng = config.rng(6);
        let mut worst = 0.0f64;
        for k in 0..config.pick(20, 5) {
            let two_j = 1 + (k % 4) as u32;
            let path = random_smooth_loop(&mut rng, two_j, 2000)?;
            let line = geometric_phase(&path, PhaseMethod::LineIntegral)?;
            let hol = geometric_phase(&path, PhaseMethod::Holonomy)?;
            worst = worst.max(wrap_phase(line - hol).abs());
        }
        checks.push(Check::below("line integral vs holonomy", worst, 1e-3));
        Ok(())
    })
}

/// Star trajectory against the Schrodinger oracle over one period, drawing
/// fresh inputs when the oracle cannot track the stars or f is singular.
fn oracle_deviation(
    rng: &mut SampleRng,
    two_j: u32,
    hamiltonian: fn(&mut SampleRng) -> HamiltonianSpec,
) -> Result<f64> {
    let mut last = Error::TrackingAmbiguous { step: 0 };
    for _ in 0..20 {
        let c = sample::spread_constellation(rng, two_j, 0.3, None);
        let h = hamiltonian(rng);
        let steps = 1000;
        let dt = h.characteristic_period(c.spin()) / steps as f64;
        let oracle = match oracle_trajectory(&c, &h, dt, steps) {
            Err(e @ Error::TrackingAmbiguous { .. }) => {
                last = e;
                continue;
            }
            other => other?,
        };
        let stars = match evolve_stars(&c, &h, dt, steps) {
            Err(e @ Error::SingularSymplecticForm { .. }) => {
                last = e;
                continue;
            }
            other => other?,
        };
        return Ok(max_star_displacement(&stars, &oracle));
    }
    Err(last)
}

/// 7. Star dynamics against the Schrodinger oracle and Landau-Lifshitz.
pub fn dynamics(config: &Config) -> Outcome {
    run(7, "star dynamics", |checks| {
        let mut rng = config.rng(7);
        let mut worst = 0.0f64;
        for two_j in 1..=4 {
            for _ in 0..config.pick(3, 1) {
                worst = worst.max(oracle_deviation(&mut rng, two_j, sample::zeeman)?);
            }
        }
        checks.push(Check::below("Zeeman vs oracle", worst, 1e-6));

        let mut worst = 0.0f64;
        for two_j in [2, 3] {
            for _ in 0..config.pick(4, 1) {
                worst = worst.max(oracle_deviation(&mut rng, two_j, sample::quadrupolar)?);
            }
        }
        checks.push(Check::below("quadrupolar vs oracle", worst, 1e-5));

        let mut worst = 0.0f64;
        for two_j in config.pick(vec![2, 3], vec![2]) {
            let c = sample::spread_constellation(&mut rng, two_j, 0.3, None);
            let h = sample::quadrupolar(&mut rng);
            let period = h.characteristic_period(c.spin());
            let t = evolve_stars(&c, &h, period / 1000.0, 10_000)?;
            let e0 = t.energies[0];
            let drift = t.energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
            worst = worst.max(drift / e0.abs().max(1.0));
        }
        checks.push(Check::below("energy drift over 10 periods", worst, 1e-8));

        let (mut spread, mut ll) = (0.0f64, 0.0f64);
        for two_j in 2..=4 {
            let spin = Spin::from_two_j(two_j);
            let n0 = sample::unit(&mut rng);
            let h = sample::zeeman(&mut rng);
            let steps = 1000;
            let dt = h.characteristic_period(spin) / steps as f64;
            let t = evolve_stars(&Constellation::coherent(spin, &n0), &h, dt, steps)?;
            let reference = landau_lifshitz_reference(&n0, h.b_field(), dt, steps);
            for (c, n) in t.constellations.iter().zip(&reference) {
                let first = c.stars()[0];
                spread = spread.max(c.stars().iter().map(|u| u.chordal(&first)).fold(0.0, f64::max));
                ll = ll.max((dipole(c)? / spin.j() - n).norm());
            }
        }
        checks.push(Check::below("coherent star spread", spread, 1e-8));
        checks.push(Check::below("spin direction vs Landau-Lifshitz", ll, 1e-6));
        Ok(())
    })
}

/// Sum over all partial matchings of the solid and open dots, by number of
/// links, with open dots treated as ordinary vertices that must be linked.
/// `mu` and `nu` pick the Cartesian labels of the open dots.
pub fn exhaustive_matching_sums(graph: &WeightedGraph, mu: usize, nu: usize) -> Vec<f64> {
    struct Walk<'a> {
        graph: &'a WeightedGraph,
        labels: [usize; 2],
        used: Vec<bool>,
        sums: Vec<f64>,
    }

    impl Walk<'_> {
        fn weight(&self, a: usize, b: usize) -> f64 {
            let ns = self.graph.n_solid();
            match (a < ns, b < ns) {
                (true, true) => self.graph.solid_solid(a, b),
                (true, false) => self.graph.solid_open(a)[self.labels[b - ns]],
                (false, true) => self.graph.solid_open(b)[self.labels[a - ns]],
                (false, false) if self.labels[0] == self.labels[1] => -2.0,
                (false, false) => 0.0,
            }
        }

        fn go(&mut self, start: usize, links: usize, product: f64) {
            let Some(v) = (start..self.used.len()).find(|&v| !self.used[v]) else {
                self.sums[links] += product;
                return;
            };
            self.used[v] = true;
            if v < self.graph.n_solid() {
                self.go(v + 1, links, product);
            }
            for w in (v + 1)..self.used.len() {
                if !self.used[w] {
                    self.used[w] = true;
                    let weight = self.weight(v, w);
                    self.go(v + 1, links + 1, product * weight);
                    self.used[w] = false;
                }
            }
            self.used[v] = false;
        }
    }

    let total = graph.n_solid() + graph.n_open();
    let mut walk = Walk { graph, labels: [mu, nu], used: vec![false; total], sums: vec![0.0; total / 2 + 1] };
    walk.go(0, 0, 1.0);
    walk.sums
}

fn random_graph(rng: &mut impl Rng, n: usize, n_open: usize) -> Result<WeightedGraph> {
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let w = rng.gen_range(0.0..1.0);
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    let open = (0..n).map(|_| Vec3::from_fn(|_, _| rng.gen_range(-1.0..1.0))).collect();
    WeightedGraph::new(d, open, n_open)
}

fn component(sums: &MatchingSums, k: usize, mu: usize, nu: usize) -> f64 {
    match sums {
        MatchingSums::Scalar(v) => v[k],
        MatchingSums::Vector(v) => v[k][mu],
        MatchingSums::Matrix(v) => v[k][(mu, nu)],
    }
}

fn matching_count(two_j: usize, n: usize) -> f64 {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    fact(two_j) / (fact(n) * 2f64.powi(n as i32) * fact(two_j - 2 * n))
}

/// 8. Subset-table matching sums against enumeration and closed-form counts, with timing.
pub fn combinatorics(config: &Config) -> Outcome {
    run(8, "matching-sum combinatorics", |checks| {
        let mut rng = config.rng(8);
        let mut worst = 0.0f64;
        for n in 0..=8 {
            for n_open in 0..=2 {
                for _ in 0..config.pick(3, 1) {
                    let g = random_graph(&mut rng, n, n_open)?;
                    let sums = matching_sums(&g)?;
                    let labels = if n_open == 0 { 1 } else { 3 };
                    for mu in 0..labels {
                        for nu in 0..(if n_open == 2 { 3 } else { 1 }) {
                            let e = exhaustive_matching_sums(&g, mu, nu);
                            let scale = e.iter().map(|x| x.abs()).fold(f64::MIN_POSITIVE, f64::max);
                            for k in 0..sums.len() {
                                let reference = e.get(k).copied().unwrap_or(0.0);
                                worst = worst.max((component(&sums, k, mu, nu) - reference).abs() / scale);
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check::below("DP vs enumeration (rel.)", worst, 1e-12));

        let mut worst = 0.0f64;
        for two_j in 0..=16usize {
            let mut d = vec![1.0; two_j * two_j];
            for i in 0..two_j {
                d[i * two_j + i] = 0.0;
            }
            let g = WeightedGraph::new(d, vec![Vec3::zeros(); two_j], 0)?;
            if let MatchingSums::Scalar(v) = matching_sums(&g)? {
                for (n, x) in v.iter().enumerate() {
                    worst = worst.max((x / matching_count(two_j, n) - 1.0).abs());
                }
            }
        }
        checks.push(Check::below("unit-weight counts (rel.)", worst, 1e-12));

        let g = random_graph(&mut rng, 20, 2)?;
        let start = Instant::now();
        matching_sums(&g)?;
        checks.push(Check::below("seconds at 2J = 20", start.elapsed().as_secs_f64(), 10.0));
        Ok(())
    })
}
