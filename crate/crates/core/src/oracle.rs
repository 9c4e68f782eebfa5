//! Dense Hilbert-space ground truth.
//!
//! States are amplitude vectors over |J, M> with the fixed descending order
//! M = J, J-1, ..., -J: index `k` holds the coefficient of |J, J-k>.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{oriented_area, Error, Mat3, Result, Spin, UnitVector, Vec3};

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A (not necessarily normalized) pure state of spin J.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    spin: Spin,
    amplitudes: Vec<Complex64>,
}

impl SpinState {
    pub fn new(spin: Spin, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), found: amplitudes.len() });
        }
        if amplitudes.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        if amplitudes.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::ZeroState);
        }
        Ok(SpinState { spin, amplitudes })
    }

    /// The basis state |J, M> with M = J - k.
    pub fn basis(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::IndexOutOfRange { index: k, len: spin.dim() });
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); spin.dim()];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(SpinState { spin, amplitudes })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> SpinState {
        let scale = 1.0 / self.norm_sqr().sqrt();
        self.scaled(Complex64::new(scale, 0.0))
    }

    pub fn scaled(&self, factor: Complex64) -> SpinState {
        SpinState { spin: self.spin, amplitudes: self.amplitudes.iter().map(|c| c * factor).collect() }
    }

    /// <self|other>.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        debug_assert_eq!(self.spin, other.spin);
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// |<a|b>|^2 / (<a|a><b|b>).
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// <psi|A|psi> / <psi|psi>.
    pub fn expectation(&self, op: &OperatorMatrix) -> Complex64 {
        let v = self.to_vector();
        let av = &op.entries * &v;
        v.dotc(&av) / self.norm_sqr()
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub fn from_vector(spin: Spin, v: &DVector<Complex64>) -> Result<Self> {
        SpinState::new(spin, v.iter().copied().collect())
    }
}

/// A dense (2J+1) x (2J+1) operator in the descending-M basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub spin: Spin,
    pub entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(spin: Spin, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != spin.dim() || entries.ncols() != spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), found: entries.nrows() });
        }
        Ok(OperatorMatrix { spin, entries })
    }

    pub fn zeros(spin: Spin) -> Self {
        OperatorMatrix { spin, entries: DMatrix::zeros(spin.dim(), spin.dim()) }
    }

    pub fn identity(spin: Spin) -> Self {
        OperatorMatrix { spin, entries: DMatrix::identity(spin.dim(), spin.dim()) }
    }

    /// max |A - A^H| over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() < HERMITIAN_TOLERANCE
    }

    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { spin: self.spin, entries: &self.entries * &other.entries }
    }

    pub fn add_scaled(&mut self, other: &OperatorMatrix, factor: f64) {
        self.entries += other.entries.map(|c| c * factor);
    }

    /// Spectral-norm-free size measure used for tolerances: max |entry|.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// Cartesian spin operators.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub x: OperatorMatrix,
    pub y: OperatorMatrix,
    pub z: OperatorMatrix,
}

impl SpinMatrices {
    pub fn component(&self, axis: usize) -> &OperatorMatrix {
        match axis {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }
}

/// J_x, J_y, J_z from the ladder construction
/// J+ |J,M> = sqrt(J(J+1) - M(M+1)) |J,M+1>.
pub fn spin_matrices(spin: Spin) -> SpinMatrices {
    let dim = spin.dim();
    let j = spin.j();
    let mut raise = DMatrix::<Complex64>::zeros(dim, dim);
    // |M+1> sits one index above |M>
    for k in 1..dim {
        let m = spin.m(k);
        raise[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let x = (&raise + &lower) * half;
    let y = (&raise - &lower) * minus_half_i;
    let z = DMatrix::from_fn(
        dim,
        dim,
        |r, c| {
            if r == c {
                Complex64::new(spin.m(r), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
    );
    SpinMatrices {
        x: OperatorMatrix { spin, entries: x },
        y: OperatorMatrix { spin, entries: y },
        z: OperatorMatrix { spin, entries: z },
    }
}

/// <J> / <psi|psi>.
pub fn spin_expectation(state: &SpinState) -> Vec3 {
    let s = spin_matrices(state.spin);
    Vec3::from_fn(|axis, _| state.expectation(s.component(axis)).re)
}

/// Quadrupole operator Q_ab = (J_a J_b + J_b J_a)/2 - J(J+1)/3 delta_ab.
pub fn quadrupole_operator(spin: Spin, a: usize, b: usize) -> OperatorMatrix {
    let s = spin_matrices(spin);
    let (ja, jb) = (s.component(a), s.component(b));
    let mut q = ja.mul(jb);
    q.add_scaled(&jb.mul(ja), 1.0);
    q.entries *= Complex64::new(0.5, 0.0);
    if a == b {
        let j = spin.j();
        q.add_scaled(&OperatorMatrix::identity(spin), -j * (j + 1.0) / 3.0);
    }
    q
}

/// <Q_ab> / <psi|psi>.
pub fn quadrupole_expectation(state: &SpinState) -> Mat3 {
    Mat3::from_fn(|a, b| state.expectation(&quadrupole_operator(state.spin, a, b)).re)
}

/// sqrt(C(n, k)) without forming factorials.
pub(crate) fn sqrt_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * f64::from(n - i) / f64::from(i + 1);
    }
    c.sqrt()
}

/// Spin coherent state pointing along `n`:
/// amplitude of |J,M> is sqrt(C(2J, J-M)) cos(theta/2)^(J+M) (sin(theta/2) e^{i phi})^(J-M).
pub fn coherent_state(spin: Spin, n: &UnitVector) -> SpinState {
    let two_j = spin.two_j();
    let (half_sin, half_cos) = (n.theta() / 2.0).sin_cos();
    let down = Complex64::from_polar(half_sin, n.phi());
    let amplitudes = (0..=two_j)
        .map(|k| {
            let up_power = half_cos.powi((two_j - k) as i32);
            down.powu(k) * (up_power * sqrt_binomial(two_j, k))
        })
        .collect();
    SpinState { spin, amplitudes }
}

/// Closed-form coherent-state overlap
/// <n1|n2> = ((1 + n1.n2)/2)^J exp(i J Sigma(z, n1, n2)).
///
/// Antipodal pairs return 0. When the triangle (z, n1, n2) is degenerate the
/// area is taken as 0, so only the modulus is meaningful there.
pub fn cs_overlap(spin: Spin, n1: &UnitVector, n2: &UnitVector) -> Complex64 {
    let j = spin.j();
    let base = (1.0 + n1.dot(n2)) / 2.0;
    if base <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let area = oriented_area(&UnitVector::z_axis(), n1, n2);
    Complex64::from_polar(base.powf(j), j * area)
}

/// Husimi function |<n|psi>|^2 (not divided by <psi|psi>).
pub fn husimi(state: &SpinState, n: &UnitVector) -> f64 {
    coherent_state(state.spin, n).inner(state).norm_sqr()
}

/// exp(-i H dt) from the eigendecomposition of the Hermitian `h`.
pub fn propagator(h: &OperatorMatrix, dt: f64) -> Result<DMatrix<Complex64>> {
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOLERANCE * h.max_abs().max(1.0) {
        return Err(Error::NonHermitian { deviation });
    }
    let eig = h.entries.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * dt)));
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

/// Applies exp(-i H dt) `steps` times. The returned list starts with the input.
pub fn evolve_schrodinger(state: &SpinState, h: &OperatorMatrix, dt: f64, steps: usize) -> Result<Vec<SpinState>> {
    if h.spin != state.spin {
        return Err(Error::SpinMismatch { left: h.spin.two_j(), right: state.spin.two_j() });
    }
    let u = propagator(h, dt)?;
    let mut out = Vec::with_capacity(steps + 1);
    let mut v = state.to_vector();
    out.push(state.clone());
    for _ in 0..steps {
        v = &u * v;
        out.push(SpinState { spin: state.spin, amplitudes: v.iter().copied().collect() });
    }
    Ok(out)
}

/// Geometric phase of a closed circuit from the Pancharatnam product,
/// -arg prod_k <psi_k|psi_{k+1}>, wrapped to (-pi, pi].
///
/// The segment from the last sample back to the first is always included, so
/// the loop may or may not repeat its first ray at the end. The result does not
/// depend on the phase or scale of any representative.
pub fn discrete_holonomy(states: &[SpinState]) -> Result<f64> {
    let n = states.len();
    if n == 0 {
        return Ok(0.0);
    }
    let spin = states[0].spin;
    let mut product = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (a, b) = (&states[k], &states[(k + 1) % n]);
        if b.spin != spin {
            return Err(Error::SpinMismatch { left: spin.two_j(), right: b.spin.two_j() });
        }
        let overlap = a.inner(b);
        let size = overlap.norm();
        if size <= 1e-12 * (a.norm_sqr() * b.norm_sqr()).sqrt() {
            return Err(Error::OrthogonalStates { index: k });
        }
        product *= overlap / size;
    }
    Ok(wrap_phase(-product.arg()))
}

/// Maps an angle to (-pi, pi].
pub fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = phi % two_pi;
    if r <= -PI {
        r += two_pi;
    } else if r > PI {
        r -= two_pi;
    }
    r
}
