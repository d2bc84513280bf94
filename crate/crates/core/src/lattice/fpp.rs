use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{LatticeBox, LatticeSpec, WeightField};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::WeightDistribution;

#[derive(Clone, Copy, Debug)]
struct Entry {
    dist: f64,
    idx: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Max-heap on reversed keys: smallest distance, then smallest index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

/// One extracted geodesic between two vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Geodesic {
    pub time: f64,
    pub path: Vec<Vec<i64>>,
    /// Largest l-infinity distance between two vertices of the path.
    pub diameter: i64,
}

/// Undirected first-passage percolation on a finite box of one shared
/// weight environment.
#[derive(Clone, Debug)]
pub struct FppField {
    field: WeightField,
    bx: LatticeBox,
}

impl FppField {
    /// Box covering the l-infinity tube of radius `box_margin * n * |x|_inf`
    /// around the segment `[0, k n x]`.
    pub fn for_blocks(
        spec: &LatticeSpec,
        dist: &WeightDistribution,
        stream: &RngStream,
        n: u64,
        k: u64,
    ) -> Result<Self> {
        spec.validate()?;
        let radius = (spec.box_margin * n as f64 * spec.linf() as f64).ceil() as i64;
        let end = spec.scaled(n * k);
        let lo: Vec<i64> = end.iter().map(|&e| e.min(0) - radius).collect();
        let hi: Vec<i64> = end.iter().map(|&e| e.max(0) + radius).collect();
        let bx = LatticeBox::new(lo, hi, spec.vertex_budget)?;
        Ok(FppField {
            field: WeightField::new(dist, stream, spec.d)?,
            bx,
        })
    }

    /// Field restricted to an explicit box `[lo, hi]`.
    pub fn in_box(
        dist: &WeightDistribution,
        stream: &RngStream,
        lo: Vec<i64>,
        hi: Vec<i64>,
        vertex_budget: usize,
    ) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() < 2 || lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::config(
                "box",
                "need matching lo <= hi of dimension >= 2",
            ));
        }
        let d = lo.len();
        Ok(FppField {
            field: WeightField::new(dist, stream, d)?,
            bx: LatticeBox::new(lo, hi, vertex_budget)?,
        })
    }

    /// Same box on a different (e.g. shifted) realization.
    pub fn with_field(&self, field: WeightField) -> Result<Self> {
        if field.dim() != self.bx.lo.len() {
            return Err(Error::config("field", "dimension mismatch"));
        }
        Ok(FppField {
            field,
            bx: self.bx.clone(),
        })
    }

    pub fn field(&self) -> &WeightField {
        &self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.bx.len
    }

    /// Weight of the edge `{v, v + e_axis}`.
    pub fn edge_weight(&self, v: &[i64], axis: usize) -> f64 {
        self.field.edge(v, axis)
    }

    fn check_inside(&self, v: &[i64]) -> Result<usize> {
        if v.len() != self.bx.lo.len() || !self.bx.contains(v) {
            return Err(Error::Domain(format!(
                "vertex {v:?} lies outside the simulation box"
            )));
        }
        Ok(self.bx.index(v))
    }

    fn dijkstra(
        &self,
        source: usize,
        targets: &[usize],
        pred: Option<&mut Vec<usize>>,
    ) -> Vec<f64> {
        let d = self.bx.lo.len();
        let mut dist = vec![f64::INFINITY; self.bx.len];
        let mut done = vec![false; self.bx.len];
        let mut pred = pred;
        if let Some(p) = pred.as_deref_mut() {
            p.clear();
            p.resize(self.bx.len, usize::MAX);
        }
        let mut remaining = targets.len();
        let mut is_target = vec![false; if targets.is_empty() { 0 } else { self.bx.len }];
        for &t in targets {
            if is_target[t] {
                remaining -= 1;
            }
            is_target[t] = true;
        }
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry {
            dist: 0.0,
            idx: source,
        });
        let mut c = vec![0i64; d];
        while let Some(Entry { dist: du, idx: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if !targets.is_empty() && is_target[u] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            self.bx.coords_into(u, &mut c);
            for a in 0..d {
                let stride = self.bx.strides[a];
                if c[a] > self.bx.lo[a] {
                    let v = u - stride;
                    if !done[v] {
                        c[a] -= 1;
                        let w = self.field.edge(&c, a);
                        c[a] += 1;
                        relax(&mut dist, &mut heap, pred.as_deref_mut(), u, v, du + w);
                    }
                }
                if c[a] < self.bx.hi[a] {
                    let v = u + stride;
                    if !done[v] {
                        let w = self.field.edge(&c, a);
                        relax(&mut dist, &mut heap, pred.as_deref_mut(), u, v, du + w);
                    }
                }
            }
        }
        dist
    }

    pub fn passage_time(&self, from: &[i64], to: &[i64]) -> Result<f64> {
        Ok(self.passage_times(from, &[to.to_vec()])?[0])
    }

    /// `T(from, t)` for each target, from a single shortest-path run.
    pub fn passage_times(&self, from: &[i64], targets: &[Vec<i64>]) -> Result<Vec<f64>> {
        let s = self.check_inside(from)?;
        let idx: Vec<usize> = targets
            .iter()
            .map(|t| self.check_inside(t))
            .collect::<Result<_>>()?;
        let dist = self.dijkstra(s, &idx, None);
        Ok(idx.iter().map(|&i| dist[i]).collect())
    }

    /// Geodesic with ties broken towards the lexicographically smallest
    /// predecessor. Fails if any vertex of it lies on the box boundary.
    pub fn geodesic(&self, from: &[i64], to: &[i64]) -> Result<Geodesic> {
        let s = self.check_inside(from)?;
        let t = self.check_inside(to)?;
        let mut pred = Vec::new();
        let dist = self.dijkstra(s, &[t], Some(&mut pred));
        let d = self.bx.lo.len();
        let mut path = Vec::new();
        let mut cur = t;
        loop {
            let mut c = vec![0i64; d];
            self.bx.coords_into(cur, &mut c);
            if self.bx.on_boundary(&c) {
                let radius = (0..d)
                    .map(|a| (self.bx.hi[a] - self.bx.lo[a]) / 2)
                    .min()
                    .unwrap_or(0);
                return Err(Error::BoundaryHit { radius });
            }
            path.push(c);
            if cur == s {
                break;
            }
            cur = pred[cur];
        }
        path.reverse();
        let diameter = (0..d)
            .map(|a| {
                let max = path.iter().map(|v| v[a]).max().unwrap_or(0);
                let min = path.iter().map(|v| v[a]).min().unwrap_or(0);
                max - min
            })
            .max()
            .unwrap_or(0);
        Ok(Geodesic {
            time: dist[t],
            path,
            diameter,
        })
    }
}

#[inline]
fn relax(
    dist: &mut [f64],
    heap: &mut BinaryHeap<Entry>,
    pred: Option<&mut Vec<usize>>,
    from: usize,
    to: usize,
    cand: f64,
) {
    if cand < dist[to] {
        dist[to] = cand;
        if let Some(p) = pred {
            p[to] = from;
        }
        heap.push(Entry {
            dist: cand,
            idx: to,
        });
    } else if cand == dist[to] {
        if let Some(p) = pred {
            if from < p[to] {
                p[to] = from;
            }
        }
    }
}

/// `T(0, n x)` for every `n` in `n_list`, all from one realization.
pub fn fpp_passage_times(
    spec: &LatticeSpec,
    n_list: &[u64],
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    let field = FppField::for_blocks(spec, dist, stream, n_max, 1)?;
    let origin = vec![0i64; spec.d];
    let targets: Vec<Vec<i64>> = n_list.iter().map(|&n| spec.scaled(n)).collect();
    field.passage_times(&origin, &targets)
}

/// `T((i-1) n x, i n x)` for `i = 1..k` on one shared realization.
pub fn fpp_block_increments(
    spec: &LatticeSpec,
    n: u64,
    k: usize,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::config("k", "block count must be >= 1"));
    }
    let field = FppField::for_blocks(spec, dist, stream, n, k as u64)?;
    (1..=k as u64)
        .map(|i| field.passage_time(&spec.scaled((i - 1) * n), &spec.scaled(i * n)))
        .collect()
}

/// Passage time `T(0, n x)` and the l-infinity diameter of one geodesic.
pub fn geodesic_diameter(
    spec: &LatticeSpec,
    n: u64,
    dist: &WeightDistribution,
    stream: &RngStream,
) -> Result<Geodesic> {
    let field = FppField::for_blocks(spec, dist, stream, n, 1)?;
    field.geodesic(&vec![0; spec.d], &spec.scaled(n))
}
