use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// 2J must be a non-negative integer.
    InvalidSpin(f64),
    NotUnitVector {
        norm: f64,
    },
    ZeroState,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    SpinMismatch {
        left: u32,
        right: u32,
    },
    NonHermitian {
        deviation: f64,
    },
    /// Diagram sums are implemented for at most two open dots.
    TooManyOpenDots(usize),
    TooManySolidDots {
        found: usize,
        max: usize,
    },
    InvalidWeights(&'static str),
    InvalidHamiltonian(&'static str),
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    DuplicateIndex(usize),
    /// Consecutive states along a loop have no defined relative phase.
    OrthogonalStates {
        index: usize,
    },
    OpenPath,
    PathDiscontinuity {
        sample: usize,
        displacement: f64,
    },
    StarOnString {
        sample: usize,
        star: usize,
    },
    /// The symplectic form is too ill-conditioned to solve for star velocities.
    SingularSymplecticForm {
        condition: f64,
    },
    TrackingAmbiguous {
        step: usize,
    },
    RootFinding {
        degree: usize,
    },
    NonFinite(&'static str),
}

impl Error {
    /// Failures of a numerical method on otherwise valid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::OrthogonalStates { .. }
                | Error::SingularSymplecticForm { .. }
                | Error::TrackingAmbiguous { .. }
                | Error::RootFinding { .. }
                | Error::NonFinite(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpin(j) => write!(f, "invalid spin {j}: 2j must be a non-negative integer"),
            Error::NotUnitVector { norm } => write!(f, "expected a unit vector, got norm {norm}"),
            Error::ZeroState => f.write_str("the zero vector does not represent a state"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SpinMismatch { left, right } => {
                write!(f, "spin mismatch: 2j = {left} vs 2j = {right}")
            }
            Error::NonHermitian { deviation } => {
                write!(f, "operator is not Hermitian (max |A - A^H| = {deviation:e})")
            }
            Error::TooManyOpenDots(n) => write!(f, "{n} open dots requested, at most 2 supported"),
            Error::TooManySolidDots { found, max } => {
                write!(f, "{found} solid dots exceed the subset-DP limit of {max}")
            }
            Error::InvalidWeights(what) => write!(f, "invalid link weights: {what}"),
            Error::InvalidHamiltonian(what) => write!(f, "invalid Hamiltonian: {what}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "star index {index} out of range for {len} stars")
            }
            Error::DuplicateIndex(i) => write!(f, "star index {i} listed twice"),
            Error::OrthogonalStates { index } => {
                write!(f, "states {index} and {} are orthogonal; phase undefined", index + 1)
            }
            Error::OpenPath => f.write_str("path is not closed"),
            Error::PathDiscontinuity { sample, displacement } => write!(
                f,
                "star displacement {displacement} between samples {sample} and {} exceeds the continuity bound",
                sample + 1
            ),
            Error::StarOnString { sample, star } => write!(
                f,
                "star {star} of sample {sample} sits on the +z Dirac string; rotate the gauge or use the holonomy method"
            ),
            Error::SingularSymplecticForm { condition } => write!(
                f,
                "symplectic form is near-degenerate (condition number {condition:e}); star velocities undefined"
            ),
            Error::TrackingAmbiguous { step } => {
                write!(f, "star assignment between oracle frames {step} and {} is ambiguous", step + 1)
            }
            Error::RootFinding { degree } => {
                write!(f, "eigenvalue iteration failed for a degree-{degree} polynomial")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
        }
    }
}

impl core::error::Error for Error {}
