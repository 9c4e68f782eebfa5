//! Pairing-diagram sums over a constellation.
//!
//! Solid dots are the 2J stars; up to two open dots carry Cartesian indices.
//! A diagram with `n` links contributes the product of its link weights:
//! `d_ij = (1 - u_i.u_j)/2` between solid dots, `u_i[mu]` between a solid dot
//! and the open dot `mu`, and `-2 delta_{mu nu}` between the two open dots.
//! Unlinked solid dots weigh 1 and unlinked open dots weigh 0.
//!
//! Evaluation goes through one table: the sum over perfect matchings of every
//! subset of solid dots, filled by a subset recursion on the lowest dot. A
//! diagram then decomposes into a perfect matching of some subset `m` of solid
//! dots, with the open dots linked to solid dots outside `m` (or to each other)
//! and every other solid dot unlinked.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{outer, Constellation, Error, Mat3, Result, Vec3};

/// Largest number of solid dots the subset table is built for (2^24 entries).
pub const MAX_SOLID_DOTS: usize = 24;

/// Link weights of the diagram rules.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_solid: usize,
    n_open: usize,
    solid_solid: Vec<f64>,
    solid_open: Vec<Vec3>,
}

impl WeightedGraph {
    /// `solid_solid` must be a symmetric distance table with entries in [0, 1]
    /// and a zero diagonal; solid-open components must lie in [-1, 1].
    pub fn new(solid_solid: Vec<f64>, solid_open: Vec<Vec3>, n_open: usize) -> Result<Self> {
        let n = solid_open.len();
        if solid_solid.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: solid_solid.len() });
        }
        if n_open > 2 {
            return Err(Error::TooManyOpenDots(n_open));
        }
        for i in 0..n {
            if solid_solid[i * n + i] != 0.0 {
                return Err(Error::InvalidWeights("d_ii must vanish"));
            }
            for j in 0..n {
                let d = solid_solid[i * n + j];
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::InvalidWeights("d_ij outside [0, 1]"));
                }
                if d != solid_solid[j * n + i] {
                    return Err(Error::InvalidWeights("d_ij not symmetric"));
                }
            }
        }
        if solid_open.iter().flat_map(|v| v.iter()).any(|x| !(-1.0..=1.0).contains(x)) {
            return Err(Error::InvalidWeights("solid-open weight outside [-1, 1]"));
        }
        Ok(WeightedGraph { n_solid: n, n_open, solid_solid, solid_open })
    }

    pub fn from_constellation(constellation: &Constellation, n_open: usize) -> Result<Self> {
        if n_open > 2 {
            return Err(Error::TooManyOpenDots(n_open));
        }
        let stars = constellation.stars();
        let n = stars.len();
        let mut solid_solid = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    solid_solid[i * n + j] = ((1.0 - stars[i].dot(&stars[j])) / 2.0).clamp(0.0, 1.0);
                }
            }
        }
        let solid_open = stars.iter().map(|u| *u.as_vec()).collect();
        Ok(WeightedGraph { n_solid: n, n_open, solid_solid, solid_open })
    }

    pub fn n_solid(&self) -> usize {
        self.n_solid
    }

    pub fn n_open(&self) -> usize {
        self.n_open
    }

    pub fn solid_solid(&self, i: usize, j: usize) -> f64 {
        self.solid_solid[i * self.n_solid + j]
    }

    pub fn solid_open(&self, i: usize) -> &Vec3 {
        &self.solid_open[i]
    }
}

/// Diagram sums indexed by the number of links. Each open dot carries one
/// Cartesian index, so the entry rank equals the number of open dots.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchingSums {
    Scalar(Vec<f64>),
    Vector(Vec<Vec3>),
    Matrix(Vec<Mat3>),
}

impl MatchingSums {
    pub fn len(&self) -> usize {
        match self {
            MatchingSums::Scalar(v) => v.len(),
            MatchingSums::Vector(v) => v.len(),
            MatchingSums::Matrix(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All three families of sums for one set of solid dots.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DiagramSums {
    pub plain: Vec<f64>,
    pub dipole: Vec<Vec3>,
    pub quadrupole: Vec<Mat3>,
}

/// Sums over all diagrams with exactly `n` links, for every `n`.
pub fn matching_sums(graph: &WeightedGraph) -> Result<MatchingSums> {
    let sums = evaluate(graph, graph.n_open)?;
    Ok(match graph.n_open {
        0 => MatchingSums::Scalar(sums.plain),
        1 => MatchingSums::Vector(sums.dipole),
        _ => MatchingSums::Matrix(sums.quadrupole),
    })
}

pub(crate) fn constellation_sums(constellation: &Constellation, n_open: usize) -> Result<DiagramSums> {
    evaluate(&WeightedGraph::from_constellation(constellation, n_open)?, n_open)
}

/// Perfect-matching sum of every subset of solid dots.
fn subset_table(graph: &WeightedGraph) -> Vec<f64> {
    let n = graph.n_solid;
    let mut table = vec![0.0; 1usize << n];
    table[0] = 1.0;
    for mask in 1usize..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let row = &graph.solid_solid[low * n..(low + 1) * n];
        let mut acc = 0.0;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc += row[j] * table[rest & !(1 << j)];
        }
        table[mask] = acc;
    }
    table
}

fn evaluate(graph: &WeightedGraph, n_open: usize) -> Result<DiagramSums> {
    let n = graph.n_solid;
    if n > MAX_SOLID_DOTS {
        return Err(Error::TooManySolidDots { found: n, max: MAX_SOLID_DOTS });
    }
    if n_open > 2 {
        return Err(Error::TooManyOpenDots(n_open));
    }
    let table = subset_table(graph);
    let mut plain = vec![0.0; n / 2 + 1];
    let mut dipole = vec![Vec3::zeros(); n.div_ceil(2) + 1];
    let mut quadrupole = vec![Mat3::zeros(); (n + 2) / 2 + 1];
    let total: Vec3 = graph.solid_open.iter().sum();
    let total_outer: Mat3 = graph.solid_open.iter().map(|u| outer(u, u)).sum();

    for (mask, &value) in table.iter().enumerate() {
        let size = mask.count_ones() as usize;
        if size % 2 == 1 || value == 0.0 {
            continue;
        }
        let links = size / 2;
        plain[links] += value;
        if n_open == 0 {
            continue;
        }
        // open dots link only to solid dots outside the mask
        let mut inside = Vec3::zeros();
        let mut inside_outer = Mat3::zeros();
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let u = &graph.solid_open[i];
            inside += u;
            if n_open == 2 {
                inside_outer += outer(u, u);
            }
        }
        let outside = total - inside;
        if size < n {
            dipole[links + 1] += outside * value;
        }
        if n_open == 1 {
            continue;
        }
        quadrupole[links + 1] -= Mat3::identity() * (2.0 * value);
        if size + 2 <= n {
            let pairs = outer(&outside, &outside) - (total_outer - inside_outer);
            quadrupole[links + 2] += pairs * value;
        }
    }
    Ok(DiagramSums { plain, dipole, quadrupole })
}

/// a! / b! as a product of at most |a - b| factors.
pub(crate) fn factorial_ratio(a: u32, b: u32) -> f64 {
    if a >= b {
        (b + 1..=a).fold(1.0, |p, k| p * f64::from(k))
    } else {
        1.0 / (a + 1..=b).fold(1.0, |p, k| p * f64::from(k))
    }
}

/// sum_n (-1)^n (2J - n)!/(2J)! D^(n).
pub(crate) fn alternating_norm(two_j: u32, plain: &[f64]) -> f64 {
    plain
        .iter()
        .enumerate()
        .map(|(links, d)| {
            let sign = if links % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial_ratio(two_j - links as u32, two_j) * d
        })
        .sum()
}

/// Rescaled norm Z = <Psi_U|Psi_U> / (2J+1) from the pairwise chordal
/// distances of the stars.
pub fn partition_function(constellation: &Constellation) -> Result<f64> {
    let two_j = constellation.spin().two_j();
    let sums = constellation_sums(constellation, 0)?;
    Ok(alternating_norm(two_j, &sums.plain) / f64::from(two_j + 1))
}

/// F = -ln Z.
pub fn free_energy(constellation: &Constellation) -> Result<f64> {
    Ok(-partition_function(constellation)?.ln())
}
