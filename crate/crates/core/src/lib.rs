//! Majorana's stellar representation of spin-J pure states.
//!
//! A ray in the (2J+1)-dimensional Hilbert space is parameterized by a
//! constellation of 2J unit vectors (the zeros of its Husimi function). This
//! crate maps states to constellations and back. Norms and low multipoles come
//! straight from the stars through pairing-diagram sums ([`diagrams`],
//! [`moments`]); [`geometry`] expresses the quantum geometric tensor in star
//! coordinates, and [`dynamics`] integrates the symplectic equations of motion
//! of the stars.
//!
//! Every closed form has a dense Hilbert-space counterpart in [`oracle`], which
//! the tests use as ground truth.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

pub mod assign;
pub mod diagrams;
pub mod dynamics;
mod error;
pub mod geometry;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod quadrature;
mod spin;
pub mod stellar;
mod vector;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spin::Spin;
pub use vector::{oriented_area, outer, Mat3, UnitVector, Vec3};

pub use diagrams::{free_energy, matching_sums, partition_function, MatchingSums, WeightedGraph};
pub use dynamics::{evolve_stars, grad_h, hamiltonian_expectation, HamiltonianSpec, Trajectory};
pub use geometry::{
    berry_connection, fubini_study_distance, geometric_phase, quantum_tensors, GeometricTensors, PhaseMethod, StarPath,
    TangentFrame,
};
pub use moments::{dipole, mean_n, mean_nn, moments, quadrupole, reduced_average, MomentSet};
pub use oracle::{coherent_state, cs_overlap, discrete_holonomy, husimi, OperatorMatrix, SpinState};
pub use stellar::{constellation_to_state, match_constellations, state_to_constellation, Constellation};
