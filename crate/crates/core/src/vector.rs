// float math for no_std; std builds resolve to the inherent methods
use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

const UNIT_TOLERANCE: f64 = 1e-12;

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Validates that `(x, y, z)` has unit length within 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vec3::new(x, y, z);
        let norm = v.dot(&v).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(UnitVector(v))
    }

    /// Projects any non-zero vector onto the sphere.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let norm = v.dot(&v).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(UnitVector(v / norm))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector(Vec3::new(st * cp, st * sp, ct))
    }

    pub const fn x_axis() -> Self {
        UnitVector(Vec3::new(1.0, 0.0, 0.0))
    }
    pub const fn y_axis() -> Self {
        UnitVector(Vec3::new(0.0, 1.0, 0.0))
    }
    pub const fn z_axis() -> Self {
        UnitVector(Vec3::new(0.0, 0.0, 1.0))
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }
    pub fn y(&self) -> f64 {
        self.0.y
    }
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn as_vec(&self) -> &Vec3 {
        &self.0
    }

    pub fn into_vec(self) -> Vec3 {
        self.0
    }

    /// Polar angle in [0, pi].
    pub fn theta(&self) -> f64 {
        let rho = self.0.x.hypot(self.0.y);
        rho.atan2(self.0.z)
    }

    /// Azimuth in (-pi, pi]; 0 on the z axis.
    pub fn phi(&self) -> f64 {
        if self.0.x == 0.0 && self.0.y == 0.0 {
            0.0
        } else {
            self.0.y.atan2(self.0.x)
        }
    }

    pub fn antipode(&self) -> Self {
        UnitVector(-self.0)
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    /// Chordal distance |a - b|, in [0, 2].
    pub fn chordal(&self, other: &UnitVector) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Moves along the great circle through `self` with initial tangent
    /// `tangent` (assumed unit and orthogonal to `self`) by arc length `t`.
    pub fn geodesic(&self, tangent: &Vec3, t: f64) -> Self {
        let (s, c) = t.sin_cos();
        UnitVector(self.0 * c + tangent * s)
    }

    /// Applies an orthogonal matrix.
    pub fn rotate(&self, rotation: &Mat3) -> Self {
        let v = rotation * self.0;
        UnitVector(v / v.norm())
    }
}

/// Oriented area of the spherical triangle (a, b, c), positive when the
/// vertices run counter-clockwise seen from outside the sphere.
///
/// Uses tan(area/2) = a.(b x c) / (1 + a.b + b.c + c.a). When the triangle is
/// degenerate with two antipodal vertices the area is undefined and 0 is
/// returned.
pub fn oriented_area(a: &UnitVector, b: &UnitVector, c: &UnitVector) -> f64 {
    let (a, b, c) = (a.as_vec(), b.as_vec(), c.as_vec());
    let triple = a.dot(&b.cross(c));
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    if triple == 0.0 && denom.abs() < 1e-15 {
        return 0.0;
    }
    2.0 * triple.atan2(denom)
}

pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    a * b.transpose()
}
