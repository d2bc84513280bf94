//! One enum over every process, with values always reported in the
//! sub-additive orientation (super-additive processes are negated).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, BlockMatrix, LatticeSpec};
use crate::rng::RngStream;
use crate::sequence::{self, BrwOutcome, BrwSpec, FbmSpec};
use crate::stats::WeightDistribution;
use crate::tracy_widom::lpp_exact_g;

const IID_DOMAIN: u64 = 0x4949_4453;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Lpp {
        lattice: LatticeSpec,
        weights: WeightDistribution,
    },
    DirectedFpp {
        lattice: LatticeSpec,
        weights: WeightDistribution,
    },
    Fpp {
        lattice: LatticeSpec,
        weights: WeightDistribution,
    },
    Polymer {
        lattice: LatticeSpec,
        weights: WeightDistribution,
        beta: f64,
    },
    Lcs {
        alphabet_size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol_pmf: Option<Vec<f64>>,
    },
    BinPacking,
    Brw {
        offspring_pmf: Vec<f64>,
        lifetime: WeightDistribution,
    },
    Fbm {
        hurst: f64,
        drift: f64,
    },
    /// `X_{m,n}` is the sum of the i.i.d. weights `m+1..=n`.
    IidSum {
        weights: WeightDistribution,
    },
}

/// Which way the raw process is ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Sub,
    Super,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Lpp { .. } => "lpp",
            ModelSpec::DirectedFpp { .. } => "directed_fpp",
            ModelSpec::Fpp { .. } => "fpp",
            ModelSpec::Polymer { .. } => "polymer",
            ModelSpec::Lcs { .. } => "lcs",
            ModelSpec::BinPacking => "bin_packing",
            ModelSpec::Brw { .. } => "brw",
            ModelSpec::Fbm { .. } => "fbm",
            ModelSpec::IidSum { .. } => "iid_sum",
        }
    }

    /// Orientation of the raw process; values returned here are always
    /// sub-additive.
    pub fn raw_orientation(&self) -> Orientation {
        match self {
            ModelSpec::Lpp { .. } | ModelSpec::Lcs { .. } => Orientation::Super,
            _ => Orientation::Sub,
        }
    }

    fn sign(&self) -> f64 {
        match self.raw_orientation() {
            Orientation::Sub => 1.0,
            Orientation::Super => -1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Lpp { lattice, weights } | ModelSpec::DirectedFpp { lattice, weights } => {
                lattice.validate_directed()?;
                weights.validate()
            }
            ModelSpec::Fpp { lattice, weights } => {
                lattice.validate()?;
                weights.validate()
            }
            ModelSpec::Polymer {
                lattice,
                weights,
                beta,
            } => {
                lattice.validate_directed()?;
                weights.validate()?;
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(Error::config(
                        "model.beta",
                        format!("must be > 0, got {beta}"),
                    ));
                }
                Ok(())
            }
            ModelSpec::Lcs {
                alphabet_size,
                symbol_pmf,
            } => sequence::SymbolSource::new(
                *alphabet_size,
                symbol_pmf.as_deref(),
                &RngStream::new(0, 0),
            )
            .map(|_| ()),
            ModelSpec::BinPacking => Ok(()),
            ModelSpec::Brw { .. } => self.brw_spec(1).validate(),
            ModelSpec::Fbm { .. } => self.fbm_spec(1).validate(),
            ModelSpec::IidSum { weights } => weights.validate(),
        }
    }

    fn brw_spec(&self, n: u64) -> BrwSpec {
        match self {
            ModelSpec::Brw {
                offspring_pmf,
                lifetime,
            } => BrwSpec {
                offspring_pmf: offspring_pmf.clone(),
                lifetime: lifetime.clone(),
                n: n.min(u32::MAX as u64) as u32,
            },
            _ => unreachable!("not a BRW model"),
        }
    }

    fn fbm_spec(&self, n_max: u64) -> FbmSpec {
        match self {
            ModelSpec::Fbm { hurst, drift } => FbmSpec {
                hurst: *hurst,
                drift: *drift,
                n_max,
            },
            _ => unreachable!("not an fBm model"),
        }
    }

    /// Closed-form `g = lim E X_{0,n} / n` in the sub-additive orientation,
    /// when one is known.
    pub fn exact_g(&self) -> Option<f64> {
        match self {
            ModelSpec::Lpp { lattice, weights } => {
                if let WeightDistribution::PointMass { value } = weights {
                    return Some(-value * l1(lattice));
                }
                if lattice.d != 2 {
                    return None;
                }
                let x = (lattice.direction[0] as f64, lattice.direction[1] as f64);
                lpp_exact_g(weights, x).ok().map(|g| -g)
            }
            ModelSpec::DirectedFpp { lattice, weights } | ModelSpec::Fpp { lattice, weights } => {
                match weights {
                    WeightDistribution::PointMass { value } => Some(value * l1(lattice)),
                    _ => None,
                }
            }
            ModelSpec::Fbm { .. } => Some(0.0),
            ModelSpec::IidSum { weights } => weights.mean(),
            _ => None,
        }
    }

    /// `X_{0,n}` for each `n` in `n_list` on the replica's realization.
    /// A NaN marks a replica with no value at that scale (BRW extinction).
    pub fn origin_values(&self, n_list: &[u64], stream: &RngStream) -> Result<Vec<f64>> {
        if n_list.is_empty() {
            return Err(Error::config("n_list", "must be nonempty"));
        }
        if n_list.contains(&0) {
            return Err(Error::config("n_list", "scales must be >= 1"));
        }
        let raw: Vec<f64> = match self {
            ModelSpec::Lpp { lattice, weights } => {
                lattice::lpp_passage_times(lattice, n_list, weights, stream)?
            }
            ModelSpec::DirectedFpp { lattice, weights } => {
                lattice::directed_fpp_passage_times(lattice, n_list, weights, stream)?
            }
            ModelSpec::Fpp { lattice, weights } => {
                lattice::fpp_passage_times(lattice, n_list, weights, stream)?
            }
            ModelSpec::Polymer {
                lattice,
                weights,
                beta,
            } => lattice::polymer_free_energies(*beta, lattice, n_list, weights, stream)?,
            ModelSpec::Lcs {
                alphabet_size,
                symbol_pmf,
            } => {
                sequence::lcs_prefix_values(n_list, *alphabet_size, symbol_pmf.as_deref(), stream)?
                    .into_iter()
                    .map(|v| v as f64)
                    .collect()
            }
            ModelSpec::BinPacking => n_list
                .iter()
                .map(|&n| sequence::bin_packing_block(0, n, stream).map(|b| b as f64))
                .collect::<Result<_>>()?,
            ModelSpec::Brw { .. } => n_list
                .iter()
                .map(|&n| {
                    sequence::brw_first_birth(&self.brw_spec(n), stream)
                        .map(|o| o.time().unwrap_or(f64::NAN))
                })
                .collect::<Result<_>>()?,
            ModelSpec::Fbm { .. } => {
                let n_max = *n_list.iter().max().unwrap();
                sequence::fbm_origin_values(&self.fbm_spec(n_max), n_list, stream)?
            }
            ModelSpec::IidSum { weights } => {
                weights.validate()?;
                let n_max = *n_list.iter().max().unwrap();
                let dom = stream.domain(IID_DOMAIN);
                let mut prefix = Vec::with_capacity(n_max as usize + 1);
                prefix.push(0.0);
                let mut acc = 0.0;
                for i in 1..=n_max {
                    acc += weights.from_uniform(dom.open01(i));
                    prefix.push(acc);
                }
                n_list.iter().map(|&n| prefix[n as usize]).collect()
            }
        };
        let sign = self.sign();
        Ok(raw.into_iter().map(|v| sign * v).collect())
    }

    /// Blocks `X_{(i-1)n, in}`, `i = 1..=k`, on one realization.
    pub fn block_values(&self, n: u64, k: usize, stream: &RngStream) -> Result<Vec<f64>> {
        if n == 0 || k == 0 {
            return Err(Error::config("k", "block scale and count must be >= 1"));
        }
        let raw: Vec<f64> = match self {
            ModelSpec::Lpp { lattice, weights } => {
                lattice::lpp_block_increments(lattice, n, k, weights, stream)?
            }
            ModelSpec::DirectedFpp { lattice, weights } => {
                lattice::directed_fpp_block_increments(lattice, n, k, weights, stream)?
            }
            ModelSpec::Fpp { lattice, weights } => {
                lattice::fpp_block_increments(lattice, n, k, weights, stream)?
            }
            ModelSpec::Polymer {
                lattice,
                weights,
                beta,
            } => lattice::polymer_block_increments(*beta, lattice, n, k, weights, stream)?,
            ModelSpec::Lcs {
                alphabet_size,
                symbol_pmf,
            } => (1..=k as u64)
                .map(|i| {
                    sequence::lcs_block(
                        (i - 1) * n,
                        i * n,
                        *alphabet_size,
                        symbol_pmf.as_deref(),
                        stream,
                    )
                    .map(|v| v as f64)
                })
                .collect::<Result<_>>()?,
            ModelSpec::BinPacking => (1..=k as u64)
                .map(|i| sequence::bin_packing_block((i - 1) * n, i * n, stream).map(|b| b as f64))
                .collect::<Result<_>>()?,
            ModelSpec::Brw { .. } => self.brw_blocks(n, k, stream)?,
            ModelSpec::Fbm { .. } => {
                sequence::fbm_counterexample_blocks(&self.fbm_spec(n * k as u64), n, k, stream)?
            }
            ModelSpec::IidSum { weights } => {
                weights.validate()?;
                let dom = stream.domain(IID_DOMAIN);
                (1..=k as u64)
                    .map(|i| {
                        ((i - 1) * n + 1..=i * n)
                            .fold(0.0, |acc, j| acc + weights.from_uniform(dom.open01(j)))
                    })
                    .collect()
            }
        };
        let sign = self.sign();
        Ok(raw.into_iter().map(|v| sign * v).collect())
    }

    /// Block `i` is the first birth `n` generations below the first-born
    /// individual of generation `(i-1) n`.
    fn brw_blocks(&self, n: u64, k: usize, stream: &RngStream) -> Result<Vec<f64>> {
        let spec = self.brw_spec(n);
        let gens = n as u32;
        let mut out = Vec::with_capacity(k);
        for i in 0..k as u32 {
            let start = match sequence::brw_first_birth_from(&spec, &[], i * gens, stream)? {
                BrwOutcome::Born { path, .. } => path,
                BrwOutcome::Extinct => {
                    out.resize(k, f64::NAN);
                    break;
                }
            };
            let t = sequence::brw_first_birth_from(&spec, &start, gens, stream)?
                .time()
                .unwrap_or(f64::NAN);
            out.push(t);
        }
        Ok(out)
    }
}

fn l1(lattice: &LatticeSpec) -> f64 {
    lattice.direction.iter().map(|c| c.abs() as f64).sum()
}

/// Runs `f` for replicas `0..replicas` (stream id = replica index) on
/// `workers` threads; results come back in replica order.
pub fn replicate<T, F>(seed: u64, replicas: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RngStream) -> Result<T> + Sync,
{
    let workers = workers.max(1);
    if workers == 1 {
        return (0..replicas as u64)
            .map(|j| f(&RngStream::new(seed, j)))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("could not start worker pool: {e}")))?;
    pool.install(|| {
        (0..replicas as u64)
            .into_par_iter()
            .map(|j| f(&RngStream::new(seed, j)))
            .collect()
    })
}

/// Block matrix over `replicas` replicas. Replicas with a missing block are
/// dropped; the second value is how many.
pub fn sample_blocks(
    model: &ModelSpec,
    n: u64,
    k: usize,
    replicas: usize,
    seed: u64,
    workers: usize,
) -> Result<(BlockMatrix, usize)> {
    model.validate()?;
    let rows = replicate(seed, replicas, workers, |s| model.block_values(n, k, s))?;
    let total = rows.len();
    let kept: Vec<Vec<f64>> = rows
        .into_iter()
        .filter(|r| r.iter().all(|v| !v.is_nan()))
        .collect();
    let dropped = total - kept.len();
    Ok((BlockMatrix::new(model.name(), n, k, kept)?, dropped))
}
