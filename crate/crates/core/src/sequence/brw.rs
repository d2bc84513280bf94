//! First birth times in a branching random walk with nonnegative lifetimes.
//!
//! An individual is named by its path of child indices from the root. Its
//! offspring count and lifetime are keyed draws on that name, so the whole
//! tree is fixed by the stream and can be re-expanded from any individual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{coord_key, KeyedDomain, RngStream};
use crate::stats::WeightDistribution;

pub const MAX_BRW_GENERATIONS: u32 = 16;
const MAX_MEAN_OFFSPRING: f64 = 3.0;
const NODE_BUDGET: u64 = 200_000_000;

const OFFSPRING_DOMAIN: u64 = 0x4f46_4653;
const LIFETIME_DOMAIN: u64 = 0x4c49_4645;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrwSpec {
    /// `offspring_pmf[k]` is the probability of `k` children.
    pub offspring_pmf: Vec<f64>,
    pub lifetime: WeightDistribution,
    /// Generation whose first birth is sought.
    pub n: u32,
}

impl BrwSpec {
    pub fn validate(&self) -> Result<()> {
        let p = &self.offspring_pmf;
        if p.is_empty() || p.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::config(
                "offspring_pmf",
                "must be a nonempty list of finite nonnegative weights",
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "offspring_pmf",
                format!("sums to {total}, expected 1"),
            ));
        }
        self.lifetime.validate()?;
        if self.n == 0 {
            return Err(Error::config("n", "generation must be >= 1"));
        }
        if self.n > MAX_BRW_GENERATIONS {
            return Err(Error::Capacity(format!(
                "generation {} exceeds the exact BRW budget of {MAX_BRW_GENERATIONS}",
                self.n
            )));
        }
        if self.mean_offspring() > MAX_MEAN_OFFSPRING {
            return Err(Error::Capacity(format!(
                "mean offspring {} exceeds the exact BRW budget of {MAX_MEAN_OFFSPRING}",
                self.mean_offspring()
            )));
        }
        Ok(())
    }

    pub fn mean_offspring(&self) -> f64 {
        self.offspring_pmf
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    pub fn is_supercritical(&self) -> bool {
        self.mean_offspring() > 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BrwOutcome {
    /// Earliest birth in the target generation, relative to the starting
    /// individual, and the name of the individual achieving it (first in
    /// depth-first order among ties).
    Born {
        time: f64,
        path: Vec<u32>,
    },
    Extinct,
}

impl BrwOutcome {
    pub fn time(&self) -> Option<f64> {
        match self {
            BrwOutcome::Born { time, .. } => Some(*time),
            BrwOutcome::Extinct => None,
        }
    }
}

struct Tree {
    cdf: Vec<f64>,
    lifetime: WeightDistribution,
    offspring: KeyedDomain,
    life: KeyedDomain,
}

impl Tree {
    fn new(spec: &BrwSpec, stream: &RngStream) -> Self {
        let total: f64 = spec.offspring_pmf.iter().sum();
        let mut acc = 0.0;
        let cdf = spec
            .offspring_pmf
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        Tree {
            cdf,
            lifetime: spec.lifetime.clone(),
            offspring: stream.domain(OFFSPRING_DOMAIN),
            life: stream.domain(LIFETIME_DOMAIN),
        }
    }

    fn key(path: &[u32]) -> u64 {
        let coords: Vec<i64> = path.iter().map(|&c| c as i64).collect();
        coord_key(path.len() as u64, &coords)
    }

    fn children(&self, key: u64) -> u32 {
        let u = self.offspring.open01(key);
        self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1) as u32
    }

    fn lifetime(&self, key: u64) -> f64 {
        self.lifetime.from_uniform(self.life.open01(key))
    }
}

/// Offspring count and lifetime of the individual named `path`.
pub fn brw_individual(spec: &BrwSpec, stream: &RngStream, path: &[u32]) -> (u32, f64) {
    let tree = Tree::new(spec, stream);
    let key = Tree::key(path);
    (tree.children(key), tree.lifetime(key))
}

struct Search<'a> {
    tree: &'a Tree,
    target_len: usize,
    path: Vec<u32>,
    best: f64,
    best_path: Option<Vec<u32>>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, t: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::Capacity(format!(
                "BRW search visited more than {NODE_BUDGET} individuals"
            )));
        }
        if self.path.len() == self.target_len {
            if t < self.best {
                self.best = t;
                self.best_path = Some(self.path.clone());
            }
            return Ok(());
        }
        // Lifetimes are nonnegative, so descendants are born no earlier.
        if t >= self.best {
            return Ok(());
        }
        let key = Tree::key(&self.path);
        let kids = self.tree.children(key);
        if kids == 0 {
            return Ok(());
        }
        let child_time = t + self.tree.lifetime(key);
        for c in 0..kids {
            self.path.push(c);
            let r = self.dfs(child_time);
            self.path.pop();
            r?;
        }
        Ok(())
    }
}

/// `B_n`: earliest birth in generation `spec.n` from the root.
pub fn brw_first_birth(spec: &BrwSpec, stream: &RngStream) -> Result<BrwOutcome> {
    brw_first_birth_from(spec, &[], spec.n, stream)
}

/// Earliest birth among descendants `generations` below the individual
/// `start`, measured from that individual's birth.
pub fn brw_first_birth_from(
    spec: &BrwSpec,
    start: &[u32],
    generations: u32,
    stream: &RngStream,
) -> Result<BrwOutcome> {
    spec.validate()?;
    if generations == 0 {
        return Ok(BrwOutcome::Born {
            time: 0.0,
            path: start.to_vec(),
        });
    }
    if start.len() as u32 + generations > MAX_BRW_GENERATIONS {
        return Err(Error::Capacity(format!(
            "generation {} exceeds the exact BRW budget of {MAX_BRW_GENERATIONS}",
            start.len() as u32 + generations
        )));
    }
    let tree = Tree::new(spec, stream);
    let mut search = Search {
        tree: &tree,
        target_len: start.len() + generations as usize,
        path: start.to_vec(),
        best: f64::INFINITY,
        best_path: None,
        nodes: 0,
    };
    search.dfs(0.0)?;
    Ok(match search.best_path {
        Some(path) => BrwOutcome::Born {
            time: search.best,
            path,
        },
        None => BrwOutcome::Extinct,
    })
}
