//! Lattice passage-time samplers: undirected first passage (Dijkstra),
//! directed first passage, last passage, and directed polymers.
//!
//! Weights are never stored as a field. Each edge or vertex weight is a keyed
//! draw from the replica's stream, addressed by its coordinates, so every
//! computation on the same stream sees the same environment.

mod directed;
mod fpp;

pub use directed::{
    directed_fpp_block_increments, directed_fpp_on_field, directed_fpp_passage_time,
    directed_fpp_passage_times, directed_vertex_min_on_field, lpp_block_increments, lpp_on_field,
    lpp_passage_time, lpp_passage_times, polymer_block_increments, polymer_free_energies,
    polymer_free_energy, polymer_on_field,
};
pub use fpp::{fpp_block_increments, fpp_passage_times, geodesic_diameter, FppField, Geodesic};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{coord_key, KeyedDomain, RngStream};
use crate::stats::WeightDistribution;

pub const DEFAULT_BOX_MARGIN: f64 = 3.0;
pub const DEFAULT_VERTEX_BUDGET: usize = 16_000_000;

const EDGE_DOMAIN: u64 = 0x4544_4745;
const VERTEX_DOMAIN: u64 = 0x5645_5254;

fn default_margin() -> f64 {
    DEFAULT_BOX_MARGIN
}

fn default_budget() -> usize {
    DEFAULT_VERTEX_BUDGET
}

/// Dimension, direction `x` and simulation-box geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub d: usize,
    pub direction: Vec<i64>,
    #[serde(default = "default_margin")]
    pub box_margin: f64,
    #[serde(default = "default_budget")]
    pub vertex_budget: usize,
}

impl LatticeSpec {
    pub fn new(direction: Vec<i64>) -> Result<Self> {
        let spec = LatticeSpec {
            d: direction.len(),
            direction,
            box_margin: DEFAULT_BOX_MARGIN,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_margin(mut self, margin: f64) -> Result<Self> {
        self.box_margin = margin;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::config(
                "d",
                format!("dimension must be >= 2, got {}", self.d),
            ));
        }
        if self.direction.len() != self.d {
            return Err(Error::config(
                "direction",
                format!(
                    "expected {} coordinates, got {}",
                    self.d,
                    self.direction.len()
                ),
            ));
        }
        if self.direction.iter().all(|&c| c == 0) {
            return Err(Error::config("direction", "must be nonzero"));
        }
        if !(self.box_margin >= 1.0 && self.box_margin.is_finite()) {
            return Err(Error::config(
                "box_margin",
                format!("must be >= 1, got {}", self.box_margin),
            ));
        }
        Ok(())
    }

    /// Directed models need `x >= 0` coordinatewise.
    pub fn validate_directed(&self) -> Result<()> {
        self.validate()?;
        if self.direction.iter().any(|&c| c < 0) {
            return Err(Error::config(
                "direction",
                "directed models require nonnegative coordinates",
            ));
        }
        Ok(())
    }

    pub fn scaled(&self, n: u64) -> Vec<i64> {
        self.direction.iter().map(|&c| c * n as i64).collect()
    }

    pub fn linf(&self) -> i64 {
        self.direction.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

/// Per-replica block values `X_{(i-1)n, in}`, `i = 1..k`, each row computed on
/// one shared realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix {
    pub model: String,
    pub n: u64,
    pub k: usize,
    /// `values[j][i]` is block `i + 1` of replica `j`.
    pub values: Vec<Vec<f64>>,
}

impl BlockMatrix {
    pub fn new(model: impl Into<String>, n: u64, k: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|row| row.len() != k) {
            return Err(Error::Protocol(format!(
                "replica {bad} has {} blocks, expected {k}",
                values[bad].len()
            )));
        }
        Ok(BlockMatrix {
            model: model.into(),
            n,
            k,
            values,
        })
    }

    pub fn replicas(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[i]).collect()
    }

    pub fn column_means(&self) -> Vec<f64> {
        let r = self.replicas() as f64;
        (0..self.k)
            .map(|i| self.values.iter().map(|row| row[i]).sum::<f64>() / r)
            .collect()
    }
}

/// Keyed i.i.d. weights on the edges and vertices of `Z^d`.
#[derive(Clone, Debug)]
pub struct WeightField {
    dist: WeightDistribution,
    edge: Vec<KeyedDomain>,
    vertex: KeyedDomain,
    d: usize,
    shift: f64,
}

impl WeightField {
    pub fn new(dist: &WeightDistribution, stream: &RngStream, d: usize) -> Result<Self> {
        dist.validate()?;
        Ok(WeightField {
            dist: dist.clone(),
            edge: (0..d as u64)
                .map(|a| stream.domain(EDGE_DOMAIN + a))
                .collect(),
            vertex: stream.domain(VERTEX_DOMAIN),
            d,
            shift: 0.0,
        })
    }

    /// The same realization with `c >= 0` added to every weight.
    pub fn shifted(mut self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::config(
                "shift",
                format!("must be finite and >= 0, got {c}"),
            ));
        }
        self.shift += c;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    fn key(&self, v: &[i64]) -> u64 {
        match self.d {
            2 => ((v[0] as u32 as u64) << 32) | (v[1] as u32 as u64),
            3 => {
                const MASK: u64 = (1 << 21) - 1;
                ((v[0] as u64 & MASK) << 42) | ((v[1] as u64 & MASK) << 21) | (v[2] as u64 & MASK)
            }
            _ => coord_key(self.d as u64, v),
        }
    }

    /// Weight of the edge `{v, v + e_axis}`.
    #[inline]
    pub fn edge(&self, v: &[i64], axis: usize) -> f64 {
        self.dist.from_uniform(self.edge[axis].open01(self.key(v))) + self.shift
    }

    #[inline]
    pub fn vertex(&self, v: &[i64]) -> f64 {
        self.dist.from_uniform(self.vertex.open01(self.key(v))) + self.shift
    }

    #[inline]
    pub(crate) fn vertex2(&self, a: i64, b: i64) -> f64 {
        let key = ((a as u32 as u64) << 32) | (b as u32 as u64);
        self.dist.from_uniform(self.vertex.open01(key)) + self.shift
    }
}

/// Axis-aligned integer box `[lo, hi]` with row-major indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub strides: Vec<usize>,
    pub len: usize,
}

impl LatticeBox {
    pub(crate) fn new(lo: Vec<i64>, hi: Vec<i64>, budget: usize) -> Result<Self> {
        let d = lo.len();
        let mut strides = vec![0usize; d];
        let mut len: u128 = 1;
        for a in (0..d).rev() {
            strides[a] = len as usize;
            let side = (hi[a] - lo[a] + 1).max(0) as u128;
            len *= side;
            if len > budget as u128 {
                return Err(Error::Capacity(format!(
                    "simulation box [{lo:?}, {hi:?}] exceeds the vertex budget of {budget} \
                     (vertex count > {len})"
                )));
            }
        }
        let coord_limit = match d {
            2 => i32::MAX as i64,
            3 => (1 << 20) - 1,
            _ => i64::MAX,
        };
        if lo.iter().chain(hi.iter()).any(|c| c.abs() > coord_limit) {
            return Err(Error::Capacity(format!(
                "box coordinates exceed the addressable range {coord_limit}"
            )));
        }
        Ok(LatticeBox {
            lo,
            hi,
            strides,
            len: len as usize,
        })
    }

    #[inline]
    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        v.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| c >= l && c <= h)
    }

    #[inline]
    pub(crate) fn index(&self, v: &[i64]) -> usize {
        v.iter()
            .enumerate()
            .map(|(a, &c)| (c - self.lo[a]) as usize * self.strides[a])
            .sum()
    }

    #[inline]
    pub(crate) fn coords_into(&self, mut idx: usize, out: &mut [i64]) {
        for a in 0..self.lo.len() {
            out[a] = self.lo[a] + (idx / self.strides[a]) as i64;
            idx %= self.strides[a];
        }
    }

    #[inline]
    pub(crate) fn on_boundary(&self, v: &[i64]) -> bool {
        v.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(c, (l, h))| c == l || c == h)
    }
}
