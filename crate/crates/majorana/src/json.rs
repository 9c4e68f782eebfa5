//! JSON forms of states, constellations, paths, Hamiltonians and trajectories.
//!
//! Floats are written with 17 significant digits so every value reads back
//! bit for bit.

use std::fmt::Display;
use std::io;
use std::path::Path;

use majorana_core::{
    Complex64, Constellation, HamiltonianSpec, Mat3, Spin, SpinState, StarPath, Trajectory, UnitVector, Vec3,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub two_j: u32,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarJson {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationJson {
    pub two_j: u32,
    pub stars: Vec<StarJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub closed: bool,
    pub samples: Vec<ConstellationJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    #[serde(default)]
    pub b_field: [f64; 3],
    #[serde(default)]
    pub quad: [[f64; 3]; 3],
    #[serde(default)]
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryJson {
    pub two_j: u32,
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub constellations: Vec<ConstellationJson>,
}

impl From<&SpinState> for StateJson {
    fn from(s: &SpinState) -> Self {
        StateJson {
            two_j: s.spin().two_j(),
            re: s.amplitudes().iter().map(|c| c.re).collect(),
            im: s.amplitudes().iter().map(|c| c.im).collect(),
        }
    }
}

impl TryFrom<&StateJson> for SpinState {
    type Error = CliError;

    fn try_from(s: &StateJson) -> Result<Self, CliError> {
        if s.re.len() != s.im.len() {
            return Err(CliError::Validation(format!(
                "state has {} real and {} imaginary parts",
                s.re.len(),
                s.im.len()
            )));
        }
        let amps = s.re.iter().zip(&s.im).map(|(&re, &im)| Complex64::new(re, im)).collect();
        Ok(SpinState::new(Spin::from_two_j(s.two_j), amps)?)
    }
}

impl From<&UnitVector> for StarJson {
    fn from(u: &UnitVector) -> Self {
        StarJson { x: u.x(), y: u.y(), z: u.z() }
    }
}

impl From<&Constellation> for ConstellationJson {
    fn from(c: &Constellation) -> Self {
        ConstellationJson { two_j: c.spin().two_j(), stars: c.stars().iter().map(StarJson::from).collect() }
    }
}

impl TryFrom<&ConstellationJson> for Constellation {
    type Error = CliError;

    fn try_from(c: &ConstellationJson) -> Result<Self, CliError> {
        let stars =
            c.stars.iter().map(|s| UnitVector::new(s.x, s.y, s.z)).collect::<majorana_core::Result<Vec<_>>>()?;
        Ok(Constellation::with_spin(Spin::from_two_j(c.two_j), stars)?)
    }
}

impl TryFrom<&PathJson> for StarPath {
    type Error = CliError;

    fn try_from(p: &PathJson) -> Result<Self, CliError> {
        let samples = p.samples.iter().map(Constellation::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok(StarPath::new(samples, p.closed)?)
    }
}

impl From<&StarPath> for PathJson {
    fn from(p: &StarPath) -> Self {
        PathJson { closed: p.is_closed(), samples: p.samples().iter().map(ConstellationJson::from).collect() }
    }
}

impl TryFrom<&HamiltonianJson> for HamiltonianSpec {
    type Error = CliError;

    fn try_from(h: &HamiltonianJson) -> Result<Self, CliError> {
        let quad = Mat3::from_fn(|r, c| h.quad[r][c]);
        Ok(HamiltonianSpec::new(Vec3::from(h.b_field), quad, h.constant)?)
    }
}

impl From<&HamiltonianSpec> for HamiltonianJson {
    fn from(h: &HamiltonianSpec) -> Self {
        let q = h.quad();
        HamiltonianJson {
            b_field: [h.b_field().x, h.b_field().y, h.b_field().z],
            quad: std::array::from_fn(|r| std::array::from_fn(|c| q[(r, c)])),
            constant: h.constant(),
        }
    }
}

impl From<&Trajectory> for TrajectoryJson {
    fn from(t: &Trajectory) -> Self {
        TrajectoryJson {
            two_j: t.constellations.first().map_or(0, |c| c.spin().two_j()),
            times: t.times.clone(),
            energies: t.energies.clone(),
            constellations: t.constellations.iter().map(ConstellationJson::from).collect(),
        }
    }
}

impl TryFrom<&TrajectoryJson> for Trajectory {
    type Error = CliError;

    fn try_from(t: &TrajectoryJson) -> Result<Self, CliError> {
        let constellations = t.constellations.iter().map(Constellation::try_from).collect::<Result<Vec<_>, _>>()?;
        if constellations.len() != t.times.len() || t.energies.len() != t.times.len() {
            return Err(CliError::Validation("trajectory arrays differ in length".into()));
        }
        Ok(Trajectory { times: t.times.clone(), constellations, energies: t.energies.clone() })
    }
}

pub fn vec3(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

pub fn mat3(m: &Mat3) -> [[f64; 3]; 3] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

/// Compact JSON whose floats carry 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloats;

impl ExactFloats {
    fn write_float<W: ?Sized + io::Write>(writer: &mut W, value: impl Into<f64>) -> io::Result<()> {
        let value = value.into();
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        Self::write_float(writer, value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        Self::write_float(writer, value)
    }
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    // the formatter only ever emits ASCII
    String::from_utf8(out).expect("JSON output is UTF-8")
}

pub fn from_str<T: DeserializeOwned>(text: &str, what: impl Display) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    from_str(&text, path.display())
}
