//! Exact minimum bin count by branch and bound.

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const MAX_BIN_ITEMS: usize = 24;

const SIZE_DOMAIN: u64 = 0x4249_4e53;
const EPS: f64 = 1e-12;

fn fits(load: f64, s: f64) -> bool {
    load + s <= 1.0 + EPS
}

fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

fn first_fit_decreasing(sorted: &[f64]) -> usize {
    let mut loads: Vec<f64> = Vec::new();
    for &s in sorted {
        match loads.iter_mut().find(|l| fits(**l, s)) {
            Some(l) => *l += s,
            None => loads.push(s),
        }
    }
    loads.len()
}

/// Larger of the continuous bound and the Martello–Toth L2 bound.
fn lower_bound(sorted: &[f64]) -> usize {
    let total: f64 = sorted.iter().sum();
    let mut best = ceil_tol(total);
    let mut alphas: Vec<f64> = vec![0.0];
    alphas.extend(sorted.iter().copied().filter(|&s| s <= 0.5));
    for alpha in alphas {
        let (mut n1, mut n2, mut sum2, mut sum3) = (0usize, 0usize, 0.0, 0.0);
        for &s in sorted {
            if s > 1.0 - alpha + EPS {
                n1 += 1;
            } else if s > 0.5 + EPS {
                n2 += 1;
                sum2 += s;
            } else if s >= alpha - EPS {
                sum3 += s;
            }
        }
        let spare = n2 as f64 - sum2;
        let extra = ceil_tol((sum3 - spare).max(0.0));
        best = best.max(n1 + n2 + extra);
    }
    best
}

struct Search<'a> {
    items: &'a [f64],
    suffix: Vec<f64>,
    loads: Vec<f64>,
    best: usize,
    target: usize,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize) {
        if self.best == self.target {
            return;
        }
        if i == self.items.len() {
            self.best = self.best.min(self.loads.len());
            return;
        }
        let free: f64 = self.loads.iter().map(|l| 1.0 - l).sum();
        let need = self.loads.len() + ceil_tol((self.suffix[i] - free).max(0.0));
        if need >= self.best {
            return;
        }
        let s = self.items[i];
        for b in 0..self.loads.len() {
            let load = self.loads[b];
            // Bins with equal load are interchangeable.
            if !fits(load, s) || self.loads[..b].contains(&load) {
                continue;
            }
            self.loads[b] += s;
            self.dfs(i + 1);
            self.loads[b] = load;
        }
        if self.loads.len() + 1 < self.best {
            self.loads.push(s);
            self.dfs(i + 1);
            self.loads.pop();
        }
    }
}

/// Minimum number of unit bins holding all `sizes`, each in `(0, 1]`.
pub fn bin_pack_min(sizes: &[f64]) -> Result<usize> {
    if sizes.is_empty() {
        return Err(Error::Domain("bin packing needs at least one item".into()));
    }
    if sizes.len() > MAX_BIN_ITEMS {
        return Err(Error::Capacity(format!(
            "{} items exceed the exact bin packing budget of {MAX_BIN_ITEMS}",
            sizes.len()
        )));
    }
    if let Some(bad) = sizes.iter().find(|&&s| !(s > 0.0 && s <= 1.0)) {
        return Err(Error::Domain(format!("item size {bad} outside (0, 1]")));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let incumbent = first_fit_decreasing(&sorted);
    let target = lower_bound(&sorted);
    if incumbent <= target {
        return Ok(incumbent);
    }
    let mut suffix = vec![0.0; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        suffix[i] = suffix[i + 1] + sorted[i];
    }
    let mut search = Search {
        items: &sorted,
        suffix,
        loads: Vec::with_capacity(sorted.len()),
        best: incumbent,
        target,
    };
    search.dfs(0);
    Ok(search.best)
}

/// Item sizes `s_{m+1}, ..., s_n`, uniform on `(0, 1)`, keyed by index.
pub fn bin_packing_sizes(m: u64, n: u64, stream: &RngStream) -> Vec<f64> {
    let dom = stream.domain(SIZE_DOMAIN);
    (m + 1..=n).map(|i| dom.open01(i)).collect()
}

/// Optimal bin count for items `m+1..=n` of the replica.
pub fn bin_packing_block(m: u64, n: u64, stream: &RngStream) -> Result<usize> {
    if m >= n {
        return Err(Error::Domain(format!(
            "bin packing block needs m < n, got m = {m}, n = {n}"
        )));
    }
    bin_pack_min(&bin_packing_sizes(m, n, stream))
}
