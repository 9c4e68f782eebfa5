//! The quantum geometric tensor in star coordinates (Berry curvature plus
//! Fubini-Study metric) and geometric phases of closed circuits.
//!
//! Tangent components at star i are taken on an orthonormal frame
//! (e1_i, e2_i = u_i x e1_i); the pair (i, a) is flattened to the index
//! `2 i + a` with a in {0, 1}.
//!
//! Sign convention: the curvature is f = da, the exterior derivative of the
//! connection below, so a spin-1/2 star carries f^{12} = +1/2 on the
//! right-handed frame and the phase of a loop equals the enclosed flux.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::DMatrix;

use crate::moments::both_means;
use crate::stellar::pair_constellations;
use crate::{
    constellation_to_state, discrete_holonomy, free_energy, mean_n, outer, Constellation, Error, Mat3, Result,
    SpinState, UnitVector, Vec3,
};

/// Stars this close to a pole get a frame built from the x axis.
const POLE_FRAME: f64 = 1e-6;
/// Berry connection refuses stars this close (chordal) to +z.
const STRING_EXCLUSION: f64 = 1e-6;
/// Line integrals refuse samples with a star this close to +z.
const PATH_STRING_EXCLUSION: f64 = 1e-3;
/// Largest per-star chordal step between consecutive path samples.
pub const MAX_PATH_STEP: f64 = 0.2;

/// Orthonormal tangent frames, one per star.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    axes: Vec<[Vec3; 2]>,
}

fn spherical_frame(u: &UnitVector) -> [Vec3; 2] {
    let v = u.as_vec();
    let rho = v.x.hypot(v.y);
    if rho < POLE_FRAME {
        let x = Vec3::x();
        let e1 = (x - v * v.dot(&x)).normalize();
        return [e1, v.cross(&e1)];
    }
    let (ct, st) = (v.z, rho);
    let (cp, sp) = (v.x / rho, v.y / rho);
    let e1 = Vec3::new(ct * cp, ct * sp, -st);
    [e1, v.cross(&e1)]
}

impl TangentFrame {
    /// (theta-hat, phi-hat) at every star.
    pub fn spherical(constellation: &Constellation) -> Self {
        TangentFrame { axes: constellation.stars().iter().map(spherical_frame).collect() }
    }

    /// Frame with the given first axes; each must be a unit vector tangent
    /// at its star. The second axis is u x e1.
    pub fn from_first_axes(constellation: &Constellation, first: &[Vec3]) -> Result<Self> {
        if first.len() != constellation.len() {
            return Err(Error::DimensionMismatch { expected: constellation.len(), found: first.len() });
        }
        let mut axes = Vec::with_capacity(first.len());
        for (u, e1) in constellation.stars().iter().zip(first) {
            if (e1.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnitVector { norm: e1.norm() });
            }
            if e1.dot(u.as_vec()).abs() > 1e-12 {
                return Err(Error::InvalidWeights("frame axis is not tangent to its star"));
            }
            axes.push([*e1, u.as_vec().cross(e1)]);
        }
        Ok(TangentFrame { axes })
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    /// Axis `alpha` (0 or 1) at star `i`.
    pub fn axis(&self, i: usize, alpha: usize) -> &Vec3 {
        &self.axes[i][alpha]
    }

    /// Components of an ambient vector on the frame at star `i`.
    pub fn project(&self, i: usize, v: &Vec3) -> [f64; 2] {
        [self.axes[i][0].dot(v), self.axes[i][1].dot(v)]
    }

    fn check(&self, constellation: &Constellation) -> Result<()> {
        if self.axes.len() != constellation.len() {
            return Err(Error::DimensionMismatch { expected: constellation.len(), found: self.axes.len() });
        }
        Ok(())
    }
}

/// Vector potential at u of a unit-flux string entering along +z and leaving
/// through n.
pub fn dirac_string_potential(u: &UnitVector, n: &UnitVector) -> Vec3 {
    let z = Vec3::z();
    let v = u.as_vec();
    -0.5 * (z.cross(v) / (1.0 - v.z) - n.as_vec().cross(v) / (1.0 - n.dot(u)))
}

fn monopole_term(u: &Vec3) -> Vec3 {
    Vec3::z().cross(u) / (1.0 - u.z)
}

fn check_string(constellation: &Constellation, exclusion: f64, sample: usize) -> Result<()> {
    let north = UnitVector::z_axis();
    match constellation.stars().iter().position(|u| u.chordal(&north) < exclusion) {
        Some(star) => Err(Error::StarOnString { sample, star }),
        None => Ok(()),
    }
}

fn reduced_means(constellation: &Constellation) -> Result<Vec<Vec3>> {
    (0..constellation.len()).map(|i| mean_n(&constellation.without(&[i])?)).collect()
}

fn connection_from(u: &Vec3, m: &Vec3) -> Vec3 {
    -0.5 * (monopole_term(u) - m.cross(u) / (1.0 - m.dot(u)))
}

/// Berry connection a_i as ambient vectors (tangent to the sphere at u_i).
pub fn berry_connection_vectors(constellation: &Constellation) -> Result<Vec<Vec3>> {
    check_string(constellation, STRING_EXCLUSION, 0)?;
    let means = reduced_means(constellation)?;
    Ok(constellation.stars().iter().zip(&means).map(|(u, m)| connection_from(u.as_vec(), m)).collect())
}

/// Berry connection components (a_i . e1_i, a_i . e2_i).
///
/// The gauge has its Dirac string along +z; a star within 1e-6 of +z is an
/// error, and the caller should rotate the constellation (or use a holonomy)
/// instead.
pub fn berry_connection(constellation: &Constellation, frame: &TangentFrame) -> Result<Vec<[f64; 2]>> {
    frame.check(constellation)?;
    let a = berry_connection_vectors(constellation)?;
    Ok(a.iter().enumerate().map(|(i, v)| frame.project(i, v)).collect())
}

/// Tangential gradient of the free energy with respect to each star, by
/// central differences along geodesics of step `h`.
pub fn free_energy_gradient(constellation: &Constellation, h: f64) -> Result<Vec<Vec3>> {
    let frame = TangentFrame::spherical(constellation);
    let mut out = Vec::with_capacity(constellation.len());
    for i in 0..constellation.len() {
        let mut grad = Vec3::zeros();
        for alpha in 0..2 {
            let e = frame.axis(i, alpha);
            let moved = |t: f64| -> Result<f64> {
                let mut stars = constellation.stars().to_vec();
                stars[i] = stars[i].geodesic(e, t);
                free_energy(&Constellation::new(stars))
            };
            grad += e * ((moved(h)? - moved(-h)?) / (2.0 * h));
        }
        out.push(grad);
    }
    Ok(out)
}

/// Berry connection from the gradient of the free energy; agrees with
/// [`berry_connection`] up to the finite-difference error.
pub fn berry_connection_gradient_form(constellation: &Constellation, frame: &TangentFrame) -> Result<Vec<[f64; 2]>> {
    frame.check(constellation)?;
    check_string(constellation, STRING_EXCLUSION, 0)?;
    let grad = free_energy_gradient(constellation, 1e-5)?;
    Ok(constellation
        .stars()
        .iter()
        .zip(&grad)
        .enumerate()
        .map(|(i, (u, g))| frame.project(i, &(-0.5 * (monopole_term(u.as_vec()) - g.cross(u.as_vec())))))
        .collect())
}

/// Metric g and curvature f, 4J x 4J, indexed by `2 i + alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricTensors {
    pub g: DMatrix<f64>,
    pub f: DMatrix<f64>,
    pub frame: TangentFrame,
}

impl GeometricTensors {
    pub fn index(star: usize, alpha: usize) -> usize {
        2 * star + alpha
    }

    /// Largest violation of the Kahler relations tying f to g:
    /// 2 f^{12} = -2 f^{21} = g^{11} = g^{22} and
    /// -2 f^{11} = -2 f^{22} = g^{12} = -g^{21}, for every block (i, j).
    pub fn kahler_residual(&self) -> f64 {
        let n = self.g.nrows() / 2;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let g = |a: usize, b: usize| self.g[(2 * i + a, 2 * j + b)];
                let f = |a: usize, b: usize| self.f[(2 * i + a, 2 * j + b)];
                let diag = g(0, 0);
                let off = g(0, 1);
                for v in [2.0 * f(0, 1), -2.0 * f(1, 0), g(1, 1)] {
                    worst = worst.max((v - diag).abs());
                }
                for v in [-2.0 * f(0, 0), -2.0 * f(1, 1), -g(1, 0)] {
                    worst = worst.max((v - off).abs());
                }
            }
        }
        worst
    }
}

/// Quantum metric and Berry curvature in star coordinates.
///
/// Diagonal blocks are `delta (1 - m_i^2) / (1 - m_i . u_i)^2` with m_i the
/// mean direction of the state without star i. Off-diagonal blocks contract
/// the correlation tensor d_ij with the frames and their quarter-turns. The
/// curvature follows from the metric through the Kahler relations.
pub fn quantum_tensors(constellation: &Constellation, frame: &TangentFrame) -> Result<GeometricTensors> {
    frame.check(constellation)?;
    let n = constellation.len();
    let stars = constellation.stars();
    let means = reduced_means(constellation)?;
    let mut g = DMatrix::zeros(2 * n, 2 * n);

    let weighted: Vec<Vec3> = stars.iter().zip(&means).map(|(u, m)| m / (1.0 - m.dot(u.as_vec()))).collect();
    for i in 0..n {
        let (u, m) = (stars[i].as_vec(), &means[i]);
        let diag = (1.0 - m.norm_squared()) / (1.0 - m.dot(u)).powi(2);
        g[(2 * i, 2 * i)] = diag;
        g[(2 * i + 1, 2 * i + 1)] = diag;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (ui, uj) = (stars[i].as_vec(), stars[j].as_vec());
            let (m, mm) = both_means(&constellation.without(&[i, j])?)?;
            let denom = 1.0 - (ui + uj).dot(&m) + ui.dot(&(mm * uj));
            let d: Mat3 = mm / denom - outer(&weighted[i], &weighted[j]);
            for a in 0..2 {
                for b in 0..2 {
                    let (ea, eb) = (frame.axis(i, a), frame.axis(j, b));
                    let (ja, jb) = (quarter_turn(frame, i, a), quarter_turn(frame, j, b));
                    let v = ea.dot(&(d * eb)) + ja.dot(&(d * jb));
                    g[(2 * i + a, 2 * j + b)] = v;
                    g[(2 * j + b, 2 * i + a)] = v;
                }
            }
        }
    }

    let mut f = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (r, c) = (2 * i, 2 * j);
            let diag = 0.5 * (g[(r, c)] + g[(r + 1, c + 1)]);
            let off = 0.5 * (g[(r, c + 1)] - g[(r + 1, c)]);
            f[(r, c + 1)] = diag / 2.0;
            f[(r + 1, c)] = -diag / 2.0;
            f[(r, c)] = -off / 2.0;
            f[(r + 1, c + 1)] = -off / 2.0;
        }
    }
    Ok(GeometricTensors { g, f, frame: frame.clone() })
}

// J e1 = e2, J e2 = -e1
fn quarter_turn(frame: &TangentFrame, i: usize, alpha: usize) -> Vec3 {
    if alpha == 0 {
        *frame.axis(i, 1)
    } else {
        -frame.axis(i, 0)
    }
}

/// Fubini-Study distance `2 arccos(|<a|b>| / (|a| |b|))`, in [0, pi].
pub fn fubini_study_distance(a: &SpinState, b: &SpinState) -> Result<f64> {
    if a.spin() != b.spin() {
        return Err(Error::SpinMismatch { left: a.spin().two_j(), right: b.spin().two_j() });
    }
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroState);
    }
    let (a, b) = (a.normalized(), b.normalized());
    let ov = a.inner(&b);
    // |b - <a|b> a| is accurate near coincidence where acos is not
    let perp: f64 =
        b.amplitudes().iter().zip(a.amplitudes()).map(|(bk, ak)| (bk - ov * ak).norm_sqr()).sum::<f64>().sqrt();
    Ok(2.0 * perp.atan2(ov.norm()))
}

/// A sampled circuit in the space of constellations.
///
/// Consecutive samples must be matchable star by star with every star moving
/// less than [`MAX_PATH_STEP`]; for a closed path the same holds between the
/// last and first samples (repeating the first sample at the end is allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct StarPath {
    samples: Vec<Constellation>,
    closed: bool,
}

impl StarPath {
    pub fn new(samples: Vec<Constellation>, closed: bool) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::InvalidWeights("a path needs at least one sample"));
        };
        for (k, s) in samples.iter().enumerate().skip(1) {
            if s.spin() != first.spin() {
                return Err(Error::SpinMismatch { left: first.spin().two_j(), right: s.spin().two_j() });
            }
            let (d, _) = pair_constellations(&samples[k - 1], s)?;
            if d >= MAX_PATH_STEP {
                return Err(Error::PathDiscontinuity { sample: k, displacement: d });
            }
        }
        if closed {
            let (d, _) = pair_constellations(&samples[samples.len() - 1], first)?;
            if d >= MAX_PATH_STEP {
                return Err(Error::PathDiscontinuity { sample: 0, displacement: d });
            }
        }
        Ok(StarPath { samples, closed })
    }

    pub fn samples(&self) -> &[Constellation] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Samples with every star relabeled to follow its own continuous track,
    /// plus the closing sample (the first one, in tracked order).
    fn tracked(&self) -> Result<Vec<Vec<UnitVector>>> {
        let mut out: Vec<Vec<UnitVector>> = vec![self.samples[0].stars().to_vec()];
        let targets = self.samples.iter().skip(1).chain(core::iter::once(&self.samples[0]));
        for next in targets {
            let prev = Constellation::new(out[out.len() - 1].clone());
            let (_, perm) = pair_constellations(&prev, next)?;
            out.push(perm.iter().map(|&p| next.stars()[p]).collect());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    /// Trapezoidal sum of a_i . du_i along each star's track (gauge with the
    /// string along +z; no star may come within 1e-3 of +z).
    LineIntegral,
    /// Discrete Pancharatnam holonomy of the sampled states.
    Holonomy,
}

/// Berry phase of a closed circuit.
///
/// The line integral is returned unwrapped; the holonomy lies in (-pi, pi].
/// For smooth, finely sampled paths they agree modulo 2 pi.
pub fn geometric_phase(path: &StarPath, method: PhaseMethod) -> Result<f64> {
    if !path.closed {
        return Err(Error::OpenPath);
    }
    match method {
        PhaseMethod::Holonomy => {
            let states: Vec<SpinState> = path.samples.iter().map(|c| constellation_to_state(c).normalized()).collect();
            discrete_holonomy(&states)
        }
        PhaseMethod::LineIntegral => {
            for (k, c) in path.samples.iter().enumerate() {
                check_string(c, PATH_STRING_EXCLUSION, k)?;
            }
            let tracks = path.tracked()?;
            let mut conn = Vec::with_capacity(tracks.len());
            for stars in &tracks {
                conn.push(berry_connection_vectors(&Constellation::new(stars.clone()))?);
            }
            let mut phase = 0.0;
            for k in 0..tracks.len() - 1 {
                for i in 0..tracks[k].len() {
                    let du = tracks[k + 1][i].as_vec() - tracks[k][i].as_vec();
                    phase += 0.5 * (conn[k][i] + conn[k + 1][i]).dot(&du);
                }
            }
            Ok(phase)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{coherent_state, Spin};
    use core::f64::consts::PI;

    #[test]
    fn frame_is_right_handed() {
        let c = Constellation::new(vec![
            UnitVector::from_angles(0.7, 2.0),
            UnitVector::z_axis(),
            UnitVector::z_axis().antipode(),
        ]);
        let fr = TangentFrame::spherical(&c);
        for (i, u) in c.stars().iter().enumerate() {
            let (e1, e2) = (fr.axis(i, 0), fr.axis(i, 1));
            assert!(e1.dot(u.as_vec()).abs() < 1e-12 && e2.dot(u.as_vec()).abs() < 1e-12);
            assert!(e1.dot(e2).abs() < 1e-12);
            assert!((e1.cross(e2) - u.as_vec()).norm() < 1e-12);
        }
    }

    #[test]
    fn spin_half_connection() {
        let u = UnitVector::from_angles(PI / 2.0, 0.3);
        let c = Constellation::new(vec![u]);
        let a = berry_connection(&c, &TangentFrame::spherical(&c)).unwrap();
        // pure azimuthal, magnitude 1/2
        assert!(a[0][0].abs() < 1e-15);
        assert!((a[0][1] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn string_is_refused() {
        let c = Constellation::new(vec![UnitVector::z_axis()]);
        assert_eq!(berry_connection(&c, &TangentFrame::spherical(&c)), Err(Error::StarOnString { sample: 0, star: 0 }));
    }

    #[test]
    fn spin_half_tensors() {
        let c = Constellation::new(vec![UnitVector::from_angles(1.1, -0.6)]);
        let t = quantum_tensors(&c, &TangentFrame::spherical(&c)).unwrap();
        assert!((t.g.clone() - DMatrix::identity(2, 2)).amax() < 1e-15);
        assert!((t.f[(0, 1)] - 0.5).abs() < 1e-15);
        assert!((t.f[(1, 0)] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn opposite_pair_block() {
        let c = Constellation::new(vec![UnitVector::z_axis(), UnitVector::z_axis().antipode()]);
        let t = quantum_tensors(&c, &TangentFrame::spherical(&c)).unwrap();
        assert!(t.kahler_residual() < 1e-14);
        assert!((t.g.clone() - t.g.transpose()).amax() < 1e-15);
    }

    #[test]
    fn distance_extremes() {
        let spin = Spin::from_two_j(3);
        let up = coherent_state(spin, &UnitVector::z_axis());
        let down = coherent_state(spin, &UnitVector::z_axis().antipode());
        assert!((fubini_study_distance(&up, &down).unwrap() - PI).abs() < 1e-15);
        let scaled = up.scaled(num_complex::Complex64::new(0.0, 3.0));
        assert!(fubini_study_distance(&up, &scaled).unwrap().abs() < 1e-15);
    }

    #[test]
    fn open_path_has_no_phase() {
        let c = Constellation::new(vec![UnitVector::x_axis()]);
        let p = StarPath::new(vec![c.clone(), c], false).unwrap();
        assert_eq!(geometric_phase(&p, PhaseMethod::Holonomy), Err(Error::OpenPath));
    }

    #[test]
    fn jumps_are_rejected() {
        let a = Constellation::new(vec![UnitVector::x_axis()]);
        let b = Constellation::new(vec![UnitVector::y_axis()]);
        assert!(matches!(StarPath::new(vec![a, b], false), Err(Error::PathDiscontinuity { sample: 1, .. })));
    }
}
