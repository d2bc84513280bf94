//! Weight distributions, streaming moments, log-log fitting and the
//! Paley-Zygmund anti-concentration bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Nonnegative i.i.d. weight law placed on edges, vertices or lifetimes.
///
/// `geometric` has support `{1, 2, ...}` with `P(X = k) = p (1-p)^(k-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDistribution {
    PointMass {
        value: f64,
    },
    /// `high` with probability `p`, otherwise `low`.
    BernoulliTwoPoint {
        low: f64,
        high: f64,
        p: f64,
    },
    Uniform01,
    Exponential {
        rate: f64,
    },
    Geometric {
        p: f64,
    },
    /// `scale * U^(-1/alpha)`; moments of order `r` exist iff `r < alpha`.
    Pareto {
        scale: f64,
        alpha: f64,
    },
}

impl WeightDistribution {
    pub fn validate(&self) -> Result<()> {
        fn finite_nonneg(field: &str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("must be finite and >= 0, got {v}"),
                ))
            }
        }
        match *self {
            WeightDistribution::PointMass { value } => finite_nonneg("value", value),
            WeightDistribution::BernoulliTwoPoint { low, high, p } => {
                finite_nonneg("low", low)?;
                finite_nonneg("high", high)?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::config("p", format!("must lie in (0,1), got {p}")));
                }
                Ok(())
            }
            WeightDistribution::Uniform01 => Ok(()),
            WeightDistribution::Exponential { rate } => {
                if rate.is_finite() && rate > 0.0 {
                    Ok(())
                } else {
                    Err(Error::config("rate", format!("must be > 0, got {rate}")))
                }
            }
            WeightDistribution::Geometric { p } => {
                if p > 0.0 && p < 1.0 {
                    Ok(())
                } else {
                    Err(Error::config("p", format!("must lie in (0,1), got {p}")))
                }
            }
            WeightDistribution::Pareto { scale, alpha } => {
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(Error::config("scale", format!("must be > 0, got {scale}")));
                }
                if !(alpha.is_finite() && alpha > 0.0) {
                    return Err(Error::config("alpha", format!("must be > 0, got {alpha}")));
                }
                Ok(())
            }
        }
    }

    /// Inverse-CDF transform of a uniform `u` in (0, 1).
    #[inline]
    pub fn from_uniform(&self, u: f64) -> f64 {
        match *self {
            WeightDistribution::PointMass { value } => value,
            WeightDistribution::BernoulliTwoPoint { low, high, p } => {
                if u < p {
                    high
                } else {
                    low
                }
            }
            WeightDistribution::Uniform01 => u,
            WeightDistribution::Exponential { rate } => -u.ln() / rate,
            WeightDistribution::Geometric { p } => 1.0 + (u.ln() / (-p).ln_1p()).floor(),
            WeightDistribution::Pareto { scale, alpha } => scale * u.powf(-1.0 / alpha),
        }
    }

    /// Whether `E X^order` is finite.
    pub fn has_moment(&self, order: f64) -> bool {
        match *self {
            WeightDistribution::Pareto { alpha, .. } => order < alpha,
            _ => true,
        }
    }

    /// The moment hypothesis `E X^(2+delta) < inf` used by the fluctuation theorems.
    pub fn has_two_plus_delta_moments(&self, delta: f64) -> bool {
        self.has_moment(2.0 + delta)
    }

    pub fn mean(&self) -> Option<f64> {
        Some(match *self {
            WeightDistribution::PointMass { value } => value,
            WeightDistribution::BernoulliTwoPoint { low, high, p } => p * high + (1.0 - p) * low,
            WeightDistribution::Uniform01 => 0.5,
            WeightDistribution::Exponential { rate } => 1.0 / rate,
            WeightDistribution::Geometric { p } => 1.0 / p,
            WeightDistribution::Pareto { scale, alpha } => {
                if alpha <= 1.0 {
                    return None;
                }
                alpha * scale / (alpha - 1.0)
            }
        })
    }

    pub fn variance(&self) -> Option<f64> {
        Some(match *self {
            WeightDistribution::PointMass { .. } => 0.0,
            WeightDistribution::BernoulliTwoPoint { low, high, p } => {
                p * (1.0 - p) * (high - low) * (high - low)
            }
            WeightDistribution::Uniform01 => 1.0 / 12.0,
            WeightDistribution::Exponential { rate } => 1.0 / (rate * rate),
            WeightDistribution::Geometric { p } => (1.0 - p) / (p * p),
            WeightDistribution::Pareto { scale, alpha } => {
                if alpha <= 2.0 {
                    return None;
                }
                scale * scale * alpha / ((alpha - 1.0) * (alpha - 1.0) * (alpha - 2.0))
            }
        })
    }

    /// Probability of an exactly zero weight (relevant for `P(t_e = 0) < p_c`).
    pub fn zero_mass(&self) -> f64 {
        match *self {
            WeightDistribution::PointMass { value } => (value == 0.0) as u8 as f64,
            WeightDistribution::BernoulliTwoPoint { low, high, p } => {
                (if high == 0.0 { p } else { 0.0 }) + (if low == 0.0 { 1.0 - p } else { 0.0 })
            }
            _ => 0.0,
        }
    }
}

/// One variate from `dist`, advancing `stream` by one position.
pub fn draw_weight(dist: &WeightDistribution, stream: &mut RngStream) -> Result<f64> {
    dist.validate()?;
    Ok(dist.from_uniform(stream.next_open01()))
}

/// Highest central-moment order tracked by [`SampleMoments`].
pub const MAX_ORDER: usize = 8;

/// Streaming mean and central power sums `sum (x - mean)^j`, `j = 2..=8`.
///
/// Updates use the exact pairwise combination of central sums, so merging
/// two accumulators reproduces accumulating the concatenated data up to
/// floating rounding.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    count: u64,
    mean: f64,
    central: [f64; MAX_ORDER + 1],
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

impl SampleMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut m = Self::new();
        for &x in xs {
            m.accumulate(x);
        }
        m
    }

    pub fn accumulate(&mut self, x: f64) {
        let single = SampleMoments {
            count: 1,
            mean: x,
            central: [0.0; MAX_ORDER + 1],
        };
        self.merge(&single);
    }

    pub fn merge(&mut self, other: &SampleMoments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        // Shifts of each part's mean relative to the pooled mean.
        let shift_a = -nb * delta / n;
        let shift_b = na * delta / n;

        let power_sum = |m: &SampleMoments, j: usize| -> f64 {
            match j {
                0 => m.count as f64,
                1 => 0.0,
                _ => m.central[j],
            }
        };

        let mut combined = [0.0; MAX_ORDER + 1];
        for (p, slot) in combined.iter_mut().enumerate().skip(2) {
            let mut acc = 0.0;
            for k in 0..=p {
                let c = binomial(p, k);
                acc += c
                    * (shift_a.powi(k as i32) * power_sum(self, p - k)
                        + shift_b.powi(k as i32) * power_sum(other, p - k));
            }
            *slot = acc;
        }
        self.mean -= shift_a;
        self.count += other.count;
        self.central = combined;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `sum (x - mean)^j` for `j` in `2..=8`.
    pub fn central_sum(&self, j: usize) -> f64 {
        self.central[j]
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.central[2] / (self.count - 1) as f64).max(0.0)
    }

    pub fn stderr_mean(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    /// Large-sample standard error of the sample variance.
    pub fn stderr_variance(&self) -> f64 {
        if self.count < 4 {
            return 0.0;
        }
        let n = self.count as f64;
        let s2 = self.variance();
        let m4 = self.central[4] / n;
        ((m4 - (n - 3.0) / (n - 1.0) * s2 * s2) / n).max(0.0).sqrt()
    }

    /// Empirical centered norm `(mean |x - mean|^p)^(1/p)` for even `p <= 8`.
    pub fn p_norm(&self, p: u32) -> Option<f64> {
        if p < 2 || !p.is_multiple_of(2) || p as usize > MAX_ORDER || self.count == 0 {
            return None;
        }
        Some((self.central[p as usize].max(0.0) / self.count as f64).powf(1.0 / p as f64))
    }
}

/// Centered empirical norm `(mean |x - mean|^p)^(1/p)` for any real `p > 0`.
pub fn centered_p_norm(xs: &[f64], p: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let s: f64 = xs.iter().map(|x| (x - mean).abs().powf(p)).sum();
    (s / n).powf(1.0 / p)
}

/// Ordinary least squares fit of `log value` against `log n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    /// `(log n, log value)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

pub fn fit_loglog(pairs: &[(u64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 3 {
        return Err(Error::Precondition(format!(
            "log-log fit needs at least 3 scales, got {}",
            pairs.len()
        )));
    }
    let mut points = Vec::with_capacity(pairs.len());
    for &(n, v) in pairs {
        if n == 0 {
            return Err(Error::Domain("scale n must be positive".into()));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!(
                "nonpositive value {v} at scale n = {n}"
            )));
        }
        points.push(((n as f64).ln(), v.ln()));
    }
    Ok(ols(points))
}

pub(crate) fn ols(points: Vec<(f64, f64)>) -> ExponentFit {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr_slope = if points.len() > 2 && sxx > 0.0 {
        (sse / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    // A perfectly flat response is fitted exactly.
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    ExponentFit {
        slope,
        intercept,
        stderr_slope,
        r_squared,
        points,
    }
}

/// Lower bound on `P(|X| >= theta * ||X||_2)` for mean-zero `X` from its
/// 2- and (2+delta)-norms: `(1-theta^2)^(1+2/delta) * (norm2/norm2pd)^(2+4/delta)`.
pub fn paley_zygmund_bound(theta: f64, delta: f64, norm2: f64, norm2pd: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!(
            "theta must lie in (0,1), got {theta}"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(norm2 > 0.0 && norm2pd > 0.0) {
        return Err(Error::Domain("norms must be positive".into()));
    }
    if norm2 > norm2pd * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "inconsistent moments: ||X||_2 = {norm2} exceeds ||X||_(2+delta) = {norm2pd}"
        )));
    }
    let ratio = (norm2 / norm2pd).min(1.0);
    let bound = (1.0 - theta * theta).powf(1.0 + 2.0 / delta) * ratio.powf(2.0 + 4.0 / delta);
    Ok(bound.clamp(0.0, 1.0))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}
