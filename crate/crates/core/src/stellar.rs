//! The Majorana representation: constellations of 2J stars and their states.
//!
//! A star u contributes the Schwinger-boson factor a+_{-u} = sin(t/2) a+_up -
//! cos(t/2) e^{i p} a+_down, with (t, p) the spherical angles of u. On the
//! z axis the azimuth is taken as 0, which places the Dirac string of this
//! gauge along +z.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::assign::bottleneck_assignment;
use crate::oracle::sqrt_binomial;
use crate::{poly, Error, Mat3, Result, Spin, SpinState, UnitVector, Vec3};

/// Amplitudes below this fraction of the largest one count as zero when
/// reading off stars at +z.
const POLE_THRESHOLD: f64 = 1e-12;

/// A multiset of 2J Majorana stars.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    spin: Spin,
    stars: Vec<UnitVector>,
}

impl Constellation {
    /// The spin is fixed by the number of stars.
    pub fn new(stars: Vec<UnitVector>) -> Self {
        Constellation { spin: Spin::from_two_j(stars.len() as u32), stars }
    }

    pub fn with_spin(spin: Spin, stars: Vec<UnitVector>) -> Result<Self> {
        if stars.len() != spin.two_j() as usize {
            return Err(Error::DimensionMismatch { expected: spin.two_j() as usize, found: stars.len() });
        }
        Ok(Constellation { spin, stars })
    }

    /// The coherent state pointing along `direction`: all stars at its antipode.
    pub fn coherent(spin: Spin, direction: &UnitVector) -> Self {
        Constellation { spin, stars: vec![direction.antipode(); spin.two_j() as usize] }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn stars(&self) -> &[UnitVector] {
        &self.stars
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    /// Removes the listed stars (spin J - |remove|/2).
    pub fn without(&self, remove: &[usize]) -> Result<Constellation> {
        let n = self.stars.len();
        let mut drop = vec![false; n];
        for &i in remove {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if drop[i] {
                return Err(Error::DuplicateIndex(i));
            }
            drop[i] = true;
        }
        let stars = self.stars.iter().zip(&drop).filter(|(_, d)| !**d).map(|(s, _)| *s).collect();
        Ok(Constellation::new(stars))
    }

    /// Adds one star (spin J + 1/2).
    pub fn with_star(&self, star: UnitVector) -> Constellation {
        let mut stars = self.stars.clone();
        stars.push(star);
        Constellation::new(stars)
    }

    pub fn rotated(&self, rotation: &Mat3) -> Constellation {
        Constellation { spin: self.spin, stars: self.stars.iter().map(|s| s.rotate(rotation)).collect() }
    }

    /// Smallest chordal distance between two distinct star slots.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.stars.iter().enumerate() {
            for b in &self.stars[i + 1..] {
                best = best.min(a.chordal(b));
            }
        }
        best
    }
}

/// (sin(t/2), cos(t/2) e^{i p}) for the factor of star `u`.
pub(crate) fn star_factor(u: &UnitVector) -> (f64, Complex64) {
    let s = ((1.0 - u.z()) / 2.0).max(0.0).sqrt();
    let c = ((1.0 + u.z()) / 2.0).max(0.0).sqrt();
    let rho = u.x().hypot(u.y());
    let phase = if rho == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(u.x() / rho, u.y() / rho) };
    (s, phase * c)
}

/// Coefficients of prod_i (s_i x - w_i y), indexed by the power of y.
pub(crate) fn factor_product(stars: &[UnitVector]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for u in stars {
        let (s, w) = star_factor(u);
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, a) in coeffs.iter().enumerate() {
            next[k] += a * s;
            next[k + 1] -= a * w;
        }
        coeffs = next;
    }
    coeffs
}

/// The fiducial state (2J)!^{-1/2} prod_i a+_{-u_i} |0>.
///
/// Not normalized: its squared norm is (2J+1) times the partition function of
/// the constellation.
pub fn constellation_to_state(constellation: &Constellation) -> SpinState {
    let two_j = constellation.spin.two_j();
    let amplitudes = factor_product(&constellation.stars)
        .into_iter()
        .enumerate()
        .map(|(k, p)| p / sqrt_binomial(two_j, k as u32))
        .collect();
    SpinState::new(constellation.spin, amplitudes).expect("a product of non-zero factors is non-zero")
}

/// Stars of a state: the roots z = cot(t/2) e^{i p} of the Majorana polynomial
/// sum_k c_k sqrt(C(2J, k)) z^(2J-k). A degree deficit of m puts m stars at +z.
pub fn state_to_constellation(state: &SpinState) -> Result<Constellation> {
    let spin = state.spin();
    let two_j = spin.two_j();
    let amplitudes = state.amplitudes();
    let largest = amplitudes.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if largest == 0.0 {
        return Err(Error::ZeroState);
    }
    let at_north = amplitudes.iter().take_while(|c| c.norm() < POLE_THRESHOLD * largest).count();
    let mut coeffs: Vec<Complex64> =
        amplitudes.iter().enumerate().skip(at_north).map(|(k, c)| c * sqrt_binomial(two_j, k as u32)).collect();
    let mut at_south = 0;
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
        at_south += 1;
    }
    let mut stars = Vec::with_capacity(two_j as usize);
    stars.extend(core::iter::repeat_n(UnitVector::z_axis(), at_north));
    stars.extend(core::iter::repeat_n(UnitVector::z_axis().antipode(), at_south));
    for z in poly::roots(&coeffs)? {
        stars.push(star_from_root(z)?);
    }
    Constellation::with_spin(spin, stars)
}

/// Inverse stereographic map of z = cot(t/2) e^{i p}.
pub(crate) fn star_from_root(z: Complex64) -> Result<UnitVector> {
    let r2 = z.norm_sqr();
    let v = if r2 <= 1.0 {
        Vec3::new(2.0 * z.re, 2.0 * z.im, r2 - 1.0) / (1.0 + r2)
    } else {
        let w = z.inv();
        let q = w.norm_sqr();
        Vec3::new(2.0 * w.re, -2.0 * w.im, 1.0 - q) / (1.0 + q)
    };
    if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
        return Err(Error::NonFinite("polynomial root"));
    }
    UnitVector::normalize(v)
}

/// Stereographic coordinate z = cot(t/2) e^{i p} of a star (infinite at +z).
pub fn stereographic(u: &UnitVector) -> Complex64 {
    let (s, w) = star_factor(u);
    w / s
}

/// Pairing of `a`'s stars with `b`'s minimizing the largest chordal
/// displacement: returns that displacement and `perm` with a[i] ~ b[perm[i]].
pub fn pair_constellations(a: &Constellation, b: &Constellation) -> Result<(f64, Vec<usize>)> {
    if a.spin != b.spin {
        return Err(Error::SpinMismatch { left: a.spin.two_j(), right: b.spin.two_j() });
    }
    let n = a.stars.len();
    let mut cost = vec![0.0; n * n];
    for (i, sa) in a.stars.iter().enumerate() {
        for (j, sb) in b.stars.iter().enumerate() {
            cost[i * n + j] = sa.chordal(sb);
        }
    }
    Ok(bottleneck_assignment(&cost, n))
}

/// Multiset distance: the smallest achievable maximum chordal displacement
/// over all star pairings. Zero iff the multisets coincide.
pub fn match_constellations(a: &Constellation, b: &Constellation) -> Result<f64> {
    pair_constellations(a, b).map(|(d, _)| d)
}
