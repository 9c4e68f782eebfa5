// float math for no_std; std builds resolve to the inherent methods
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A spin quantum number J, stored as the integer 2J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const fn from_two_j(two_j: u32) -> Self {
        Spin(two_j)
    }

    /// Accepts J = 0, 1/2, 1, ...
    pub fn from_j(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j.is_finite() && two_j >= 0.0) || (two_j - two_j.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Spin(two_j.round() as u32))
    }

    pub const fn two_j(self) -> u32 {
        self.0
    }

    pub fn j(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Hilbert-space dimension 2J + 1.
    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Magnetic quantum number of basis index `k` (descending order M = J - k).
    pub fn m(self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integers_only() {
        assert_eq!(Spin::from_j(1.5).unwrap().two_j(), 3);
        assert!(Spin::from_j(0.3).is_err());
        assert!(Spin::from_j(-1.0).is_err());
        assert_eq!(Spin::from_two_j(3).dim(), 4);
        assert_eq!(Spin::from_two_j(3).m(3), -1.5);
    }
}
