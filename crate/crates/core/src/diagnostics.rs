//! Monte Carlo checks on block matrices: covariance decay, lower-tail CLT,
//! the variance inequality linking scales `n` and `mn`, variance ratios,
//! and the big-block/small-block decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::BlockMatrix;
use crate::models::{replicate, ModelSpec};
use crate::stats::{normal_cdf, SampleMoments};

pub const DEFAULT_SLACK: f64 = 3.0;
pub const MIN_COVARIANCE_REPLICAS: usize = 1000;
pub const MIN_TAIL_REPLICAS: usize = 5000;
pub const MIN_RATIO_REPLICAS: usize = 2000;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean of `xs`.
fn stderr(xs: &[f64]) -> f64 {
    SampleMoments::from_slice(xs).stderr_mean()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceProfile {
    pub n: u64,
    pub replicas: usize,
    pub variance: f64,
    /// `cov[r]`: covariance of blocks `r` apart, averaged over positions.
    pub cov: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Tail sums `sum_{|i-j| >= r} Cov(i, j) / Var`, averaged over `i`.
    pub u_avg: Vec<f64>,
    /// Same tail sums, maximized over `i`.
    pub u_max: Vec<f64>,
    pub degenerate: bool,
}

pub fn covariance_profile(blocks: &BlockMatrix, r_max: usize) -> Result<CovarianceProfile> {
    let k = blocks.k;
    if k < r_max + 2 {
        return Err(Error::Precondition(format!(
            "covariance profile needs k >= r_max + 2, got k = {k}, r_max = {r_max}"
        )));
    }
    let reps = blocks.replicas();
    if reps < MIN_COVARIANCE_REPLICAS {
        return Err(Error::Precondition(format!(
            "covariance profile needs at least {MIN_COVARIANCE_REPLICAS} replicas, got {reps}"
        )));
    }
    let means = blocks.column_means();
    let centered: Vec<Vec<f64>> = blocks
        .values
        .iter()
        .map(|row| row.iter().zip(&means).map(|(x, m)| x - m).collect())
        .collect();
    let unbias = reps as f64 / (reps as f64 - 1.0);
    let mut cov = Vec::with_capacity(r_max + 1);
    let mut se = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        // Per-replica average of lag-r products; its spread gives the
        // standard error without assuming independent pairs.
        let z: Vec<f64> = centered
            .iter()
            .map(|c| (0..k - r).map(|i| c[i] * c[i + r]).sum::<f64>() / (k - r) as f64)
            .collect();
        cov.push(mean(&z) * unbias);
        se.push(stderr(&z) * unbias);
    }
    let variance = cov[0];
    let degenerate = !(variance > 0.0);
    let mut matrix = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let c = centered.iter().map(|row| row[i] * row[j]).sum::<f64>() / (reps as f64 - 1.0);
            matrix[i][j] = c;
            matrix[j][i] = c;
        }
    }
    let (mut u_avg, mut u_max) = (Vec::new(), Vec::new());
    for r in 0..=r_max {
        let tails: Vec<f64> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| i.abs_diff(j) >= r)
                    .map(|j| matrix[i][j])
                    .sum::<f64>()
            })
            .collect();
        if degenerate {
            u_avg.push(f64::NAN);
            u_max.push(f64::NAN);
        } else {
            u_avg.push(mean(&tails) / variance);
            u_max.push(tails.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / variance);
        }
    }
    Ok(CovarianceProfile {
        n: blocks.n,
        replicas: reps,
        variance,
        cov,
        stderr: se,
        u_avg,
        u_max,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub y: f64,
    pub empirical: f64,
    pub reference: f64,
    pub stderr: f64,
    /// `Phi(y / sqrt(C5))` for `C5 = 0.5` and `C5 = 1`, for context.
    pub mixing_reference: [f64; 2],
    pub pass: bool,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub k: usize,
    pub replicas: usize,
    pub sigma_hat: f64,
    pub points: Vec<TailPoint>,
    pub pass: bool,
}

/// Empirical `P(S' <= y sigma sqrt(k))` for the centered row sums `S'`,
/// against `Phi(y)`.
pub fn clt_lower_tail_check(blocks: &BlockMatrix, y_grid: &[f64], slack: f64) -> Result<TailCheck> {
    let reps = blocks.replicas();
    if reps < MIN_TAIL_REPLICAS {
        return Err(Error::Precondition(format!(
            "tail check needs at least {MIN_TAIL_REPLICAS} replicas, got {reps}"
        )));
    }
    if let Some(y) = y_grid.iter().find(|y| !(**y <= 0.0)) {
        return Err(Error::Domain(format!(
            "tail check grid must be nonpositive, got {y}"
        )));
    }
    let k = blocks.k;
    let means = blocks.column_means();
    // Pooled block standard deviation, each column centered at its own mean.
    let ss: f64 = blocks
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&means)
                .map(|(x, m)| (x - m).powi(2))
                .sum::<f64>()
        })
        .sum();
    let sigma = (ss / (k as f64 * (reps as f64 - 1.0))).sqrt();
    let sums: Vec<f64> = blocks.values.iter().map(|row| row.iter().sum()).collect();
    let sum_mean = mean(&sums);
    let scale = sigma * (k as f64).sqrt();
    let points: Vec<TailPoint> = y_grid
        .iter()
        .map(|&y| {
            let hits = sums.iter().filter(|&&s| s - sum_mean <= y * scale).count();
            let empirical = hits as f64 / reps as f64;
            let reference = normal_cdf(y);
            let se = (reference * (1.0 - reference) / reps as f64).sqrt();
            let vacuous = reference * (reps as f64) < 1.0;
            TailPoint {
                y,
                empirical,
                reference,
                stderr: se,
                mixing_reference: [normal_cdf(y / 0.5f64.sqrt()), normal_cdf(y)],
                pass: vacuous || empirical >= reference - slack * se,
                vacuous,
            }
        })
        .collect();
    let pass = points.iter().all(|p| p.pass);
    Ok(TailCheck {
        k,
        replicas: reps,
        sigma_hat: sigma,
        points,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyInequalityReport {
    pub n: u64,
    pub m: usize,
    pub replicas: usize,
    /// `Var X_{0,mn}` and its standard error.
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// `E (sum X'_blocks + m (E X_{0,n} - n g))_-^2` and its standard error.
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// `m (E X_{0,n} - n g)`.
    pub drift_term: f64,
    pub pass: bool,
    /// Fraction of replicas satisfying the samplewise inequality.
    pub samplewise_fraction: f64,
    pub samplewise_pass: bool,
}

/// Compares the variance at scale `mn` with the negative-part moment built
/// from its `m` blocks of scale `n`. `whole[j]` and `blocks.values[j]` must
/// come from the same replica.
pub fn key_inequality_check(
    whole: &[f64],
    blocks: &BlockMatrix,
    g: f64,
    slack: f64,
) -> Result<KeyInequalityReport> {
    let reps = blocks.replicas();
    if whole.len() != reps {
        return Err(Error::Protocol(format!(
            "{} whole-scale samples for {reps} block rows; both must come from shared realizations",
            whole.len()
        )));
    }
    if reps < 2 {
        return Err(Error::Precondition("need at least 2 replicas".into()));
    }
    let m = blocks.k;
    let n = blocks.n;
    let whole_m = SampleMoments::from_slice(whole);
    let all_blocks: Vec<f64> = blocks.values.iter().flatten().copied().collect();
    let block_mean = mean(&all_blocks);
    let drift = m as f64 * (block_mean - n as f64 * g);
    let z: Vec<f64> = blocks
        .values
        .iter()
        .map(|row| row.iter().map(|x| x - block_mean).sum::<f64>() + drift)
        .collect();
    let neg_sq: Vec<f64> = z
        .iter()
        .map(|v| if *v < 0.0 { v * v } else { 0.0 })
        .collect();
    let rhs = mean(&neg_sq);
    let rhs_stderr = stderr(&neg_sq);
    let lhs = whole_m.variance();
    let lhs_stderr = whole_m.stderr_variance();
    let pass = lhs >= rhs - slack * (lhs_stderr.powi(2) + rhs_stderr.powi(2)).sqrt();

    // Samplewise: X'_{0,mn} <= sum X'_blocks + drift, up to the error in the
    // estimated means.
    let block_row_means: Vec<f64> = blocks
        .values
        .iter()
        .map(|r| r.iter().sum::<f64>())
        .collect();
    let means_err = (whole_m.stderr_mean().powi(2) + stderr(&block_row_means).powi(2)).sqrt();
    let ok = whole
        .iter()
        .zip(&z)
        .filter(|(w, zz)| *w - whole_m.mean() <= **zz + slack * means_err + 1e-9 * (1.0 + w.abs()))
        .count();
    let samplewise_fraction = ok as f64 / reps as f64;
    Ok(KeyInequalityReport {
        n,
        m,
        replicas: reps,
        lhs,
        lhs_stderr,
        rhs,
        rhs_stderr,
        drift_term: drift,
        pass,
        samplewise_fraction,
        samplewise_pass: ok == reps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceRatioCell {
    pub k: u64,
    pub ratio: f64,
    pub stderr: f64,
    /// `Var X_{0,n} / (E X_{0,n} - n g)^2`; the ratio bound needs `k` small
    /// against it.
    pub budget: Option<f64>,
    /// `holds`, `fails`, or `unknown` (no `g`).
    pub applicability: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceRatioScan {
    pub model: String,
    pub n: u64,
    pub replicas: usize,
    pub cells: Vec<VarianceRatioCell>,
}

/// `Var X_{0,kn} / (k Var X_{0,n})` for each `k` in `k_grid`, from shared
/// replicas.
pub fn variance_ratio_scan(
    model: &ModelSpec,
    n: u64,
    k_grid: &[u64],
    replicas: usize,
    seed: u64,
    workers: usize,
    g: Option<f64>,
) -> Result<VarianceRatioScan> {
    if replicas < MIN_RATIO_REPLICAS {
        return Err(Error::Precondition(format!(
            "variance ratio scan needs at least {MIN_RATIO_REPLICAS} replicas, got {replicas}"
        )));
    }
    if k_grid.is_empty() || k_grid.contains(&0) {
        return Err(Error::config(
            "k_grid",
            "must be nonempty with entries >= 1",
        ));
    }
    model.validate()?;
    let mut scales = vec![n];
    scales.extend(k_grid.iter().map(|k| k * n));
    scales.sort_unstable();
    scales.dedup();
    let rows = replicate(seed, replicas, workers, |s| model.origin_values(&scales, s))?;
    let rows: Vec<Vec<f64>> = rows
        .into_iter()
        .filter(|r| r.iter().all(|v| !v.is_nan()))
        .collect();
    let column = |scale: u64| -> Vec<f64> {
        let idx = scales.iter().position(|&s| s == scale).unwrap();
        rows.iter().map(|r| r[idx]).collect()
    };
    let base = SampleMoments::from_slice(&column(n));
    let budget = g.map(|g| {
        let gap = base.mean() - n as f64 * g;
        if gap == 0.0 {
            f64::INFINITY
        } else {
            base.variance() / (gap * gap)
        }
    });
    let cells = k_grid
        .iter()
        .map(|&k| {
            let big = SampleMoments::from_slice(&column(k * n));
            let ratio = big.variance() / (k as f64 * base.variance());
            let rel = ((big.stderr_variance() / big.variance()).powi(2)
                + (base.stderr_variance() / base.variance()).powi(2))
            .sqrt();
            let applicability = match budget {
                None => "unknown".to_string(),
                Some(b) if (k as f64) <= 0.1 * b => "holds".to_string(),
                Some(_) => "condition fails".to_string(),
            };
            VarianceRatioCell {
                k,
                ratio,
                stderr: ratio * rel,
                budget,
                applicability,
            }
        })
        .collect();
    Ok(VarianceRatioScan {
        model: model.name().to_string(),
        n,
        replicas: rows.len(),
        cells,
    })
}

/// Big-block size `floor(sqrt r)` and small-block size `floor(p / ln r)`.
pub fn blocking_sizes(r: usize) -> Result<(usize, usize, usize)> {
    if r < 16 {
        return Err(Error::Precondition(format!(
            "blocking needs r >= 16, got {r}"
        )));
    }
    let p = (r as f64).sqrt().floor() as usize;
    let p = if (p + 1) * (p + 1) <= r {
        p + 1
    } else if p * p > r {
        p - 1
    } else {
        p
    };
    let q = (p as f64 / (r as f64).ln()).floor() as usize;
    let k = r.div_ceil(p + q);
    Ok((p, q, k))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockingReport {
    pub r: usize,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub replicas: usize,
    /// Number of terms that fall in small blocks (the last big block may be
    /// cut short at `r`).
    pub small_terms: usize,
    /// `Var(sum W) / Var(S)` with a ratio-estimator standard error.
    pub small_share: f64,
    pub small_share_stderr: f64,
    /// Share predicted for uncorrelated, equal-variance terms.
    pub iid_share: f64,
    /// KS distance of the standardized big-block sum from the normal law.
    pub ks_normal: f64,
    /// Largest `|sum V + sum W - S|` over replicas.
    pub identity_error: f64,
}

/// Alternating big (size `p`) and small (size `q`) blocks over each row.
pub fn blocking_decomposition(rows: &BlockMatrix) -> Result<BlockingReport> {
    let r = rows.k;
    let (p, q, k) = blocking_sizes(r)?;
    let reps = rows.replicas();
    if reps < 2 {
        return Err(Error::Precondition("need at least 2 replicas".into()));
    }
    let mut is_small = vec![false; r];
    for (i, flag) in is_small.iter_mut().enumerate() {
        *flag = i % (p + q) >= p;
    }
    let small_terms = is_small.iter().filter(|&&s| s).count();
    let mut v_sums = Vec::with_capacity(reps);
    let mut w_sums = Vec::with_capacity(reps);
    let mut s_sums = Vec::with_capacity(reps);
    let mut identity_error: f64 = 0.0;
    for row in &rows.values {
        let s: f64 = row.iter().sum();
        let (mut v, mut w) = (0.0, 0.0);
        for (chunk_start, chunk) in row.chunks(p + q).enumerate().map(|(j, c)| (j * (p + q), c)) {
            let _ = chunk_start;
            let big = chunk.len().min(p);
            v += chunk[..big].iter().sum::<f64>();
            w += chunk[big..].iter().sum::<f64>();
        }
        identity_error = identity_error.max((v + w - s).abs());
        v_sums.push(v);
        w_sums.push(w);
        s_sums.push(s);
    }
    let (wm, sm) = (mean(&w_sums), mean(&s_sums));
    let a: Vec<f64> = w_sums.iter().map(|w| (w - wm).powi(2)).collect();
    let b: Vec<f64> = s_sums.iter().map(|s| (s - sm).powi(2)).collect();
    let (am, bm) = (mean(&a), mean(&b));
    let (share, share_se) = if bm > 0.0 {
        let ratio = am / bm;
        let resid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - ratio * y).collect();
        (ratio, stderr(&resid) / bm)
    } else {
        (0.0, 0.0)
    };
    let vm = SampleMoments::from_slice(&v_sums);
    let ks_normal = if vm.variance() > 0.0 {
        let sd = vm.variance().sqrt();
        let z: Vec<f64> = v_sums.iter().map(|v| (v - vm.mean()) / sd).collect();
        ks_statistic(&z, normal_cdf)?
    } else {
        0.0
    };
    Ok(BlockingReport {
        r,
        p,
        q,
        k,
        replicas: reps,
        small_terms,
        small_share: share,
        small_share_stderr: share_se,
        iid_share: small_terms as f64 / r as f64,
        ks_normal,
        identity_error,
    })
}

/// Rounding noise tolerated when checking that the reference CDF is monotone.
const MONOTONE_TOL: f64 = 1e-12;

/// `sup_x |F_n(x) - F(x)|` for the right-continuous empirical CDF `F_n`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], reference_cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Precondition(
            "KS statistic needs at least one sample".into(),
        ));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("KS statistic: NaN sample".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev_f = f64::NEG_INFINITY;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f_left = reference_cdf(x.next_down());
        let f = reference_cdf(x);
        if !(0.0..=1.0).contains(&f)
            || !(0.0..=1.0).contains(&f_left)
            || f_left > f + MONOTONE_TOL
            || f_left < prev_f - MONOTONE_TOL
        {
            return Err(Error::Domain(format!(
                "reference CDF is not monotone in [0, 1] near {x}"
            )));
        }
        prev_f = f;
        d = d
            .max((i as f64 / n - f_left).abs())
            .max((j as f64 / n - f).abs());
        i = j;
    }
    Ok(d)
}
