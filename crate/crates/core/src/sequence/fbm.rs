//! Fractional Gaussian noise and the drifted fBm counterexample
//! `X_{m,n} = (B_H(n) - B_H(m)) + (n - m)^h`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

const FBM_STREAM: u64 = 0x4642_4d00;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FbmSpec {
    /// Hurst exponent `H` in (0, 1).
    pub hurst: f64,
    /// Drift exponent `h < 1`; the drift is `x_n = n^h`.
    pub drift: f64,
    pub n_max: u64,
}

impl FbmSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::config(
                "hurst",
                format!("must lie in (0, 1), got {}", self.hurst),
            ));
        }
        if !(self.drift < 1.0 && self.drift.is_finite()) {
            return Err(Error::config(
                "drift",
                format!("must be < 1, got {}", self.drift),
            ));
        }
        if self.n_max == 0 {
            return Err(Error::config("n_max", "must be >= 1"));
        }
        Ok(())
    }

    pub fn drift_at(&self, n: u64) -> f64 {
        (n as f64).powf(self.drift)
    }
}

/// Autocovariance of unit fractional Gaussian noise at lag `k`.
pub(crate) fn fgn_autocov(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

#[derive(Clone)]
enum Method {
    /// Circulant embedding: square roots of `lambda_j / M` and the FFT plan.
    Circulant {
        scale: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    /// Durbin–Levinson recursion, `O(len^2)` per sample.
    Sequential { min_eigenvalue: Option<f64> },
}

/// Exact sampler for `len` increments of fBm with unit variance per step.
#[derive(Clone)]
pub struct FbmGenerator {
    hurst: f64,
    len: usize,
    method: Method,
}

impl std::fmt::Debug for FbmGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FbmGenerator")
            .field("hurst", &self.hurst)
            .field("len", &self.len)
            .field("circulant", &self.is_circulant())
            .finish()
    }
}

impl FbmGenerator {
    /// Circulant embedding, falling back to the sequential method when the
    /// embedding has a negative eigenvalue.
    pub fn new(hurst: f64, len: usize) -> Result<Self> {
        check_args(hurst, len)?;
        let m = 2 * len;
        let mut c: Vec<Complex64> = (0..m)
            .map(|j| {
                let lag = if j <= len { j } else { m - j };
                Complex64::new(fgn_autocov(hurst, lag), 0.0)
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut c);
        let eig: Vec<f64> = c.iter().map(|z| z.re).collect();
        let max = eig.iter().cloned().fold(0.0, f64::max);
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 * max.max(1.0) {
            return Ok(FbmGenerator {
                hurst,
                len,
                method: Method::Sequential {
                    min_eigenvalue: Some(min),
                },
            });
        }
        let scale = eig
            .iter()
            .map(|&l| (l.max(0.0) / m as f64).sqrt())
            .collect();
        Ok(FbmGenerator {
            hurst,
            len,
            method: Method::Circulant { scale, fft },
        })
    }

    pub fn sequential(hurst: f64, len: usize) -> Result<Self> {
        check_args(hurst, len)?;
        Ok(FbmGenerator {
            hurst,
            len,
            method: Method::Sequential {
                min_eigenvalue: None,
            },
        })
    }

    pub fn is_circulant(&self) -> bool {
        matches!(self.method, Method::Circulant { .. })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `len` increments `B_H(t) - B_H(t-1)`, `t = 1..=len`.
    pub fn increments(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        match &self.method {
            Method::Circulant { scale, fft } => {
                let mut w: Vec<Complex64> = scale
                    .iter()
                    .map(|&s| {
                        let a: f64 = StandardNormal.sample(rng);
                        let b: f64 = StandardNormal.sample(rng);
                        Complex64::new(s * a, s * b)
                    })
                    .collect();
                fft.process(&mut w);
                Ok(w[..self.len].iter().map(|z| z.re).collect())
            }
            Method::Sequential { min_eigenvalue } => self.durbin_levinson(rng, *min_eigenvalue),
        }
    }

    fn durbin_levinson(
        &self,
        rng: &mut RngStream,
        min_eigenvalue: Option<f64>,
    ) -> Result<Vec<f64>> {
        let n = self.len;
        let gamma: Vec<f64> = (0..n).map(|k| fgn_autocov(self.hurst, k)).collect();
        let mut x = Vec::with_capacity(n);
        let mut phi = vec![0.0; n];
        let mut prev = vec![0.0; n];
        let mut v = gamma[0];
        let z: f64 = StandardNormal.sample(rng);
        x.push(v.sqrt() * z);
        for t in 1..n {
            let acc: f64 = (1..t).map(|j| prev[j] * gamma[t - j]).sum();
            let ptt = (gamma[t] - acc) / v;
            phi[t] = ptt;
            for j in 1..t {
                phi[j] = prev[j] - ptt * prev[t - j];
            }
            v *= 1.0 - ptt * ptt;
            if !(v > 0.0) {
                return Err(Error::Numerical(format!(
                    "fBm generation failed: conditional variance {v} at step {t}; \
                     circulant minimum eigenvalue {min_eigenvalue:?}"
                )));
            }
            let mean: f64 = (1..=t).map(|j| phi[j] * x[t - j]).sum();
            let z: f64 = StandardNormal.sample(rng);
            x.push(mean + v.sqrt() * z);
            prev[..=t].copy_from_slice(&phi[..=t]);
        }
        Ok(x)
    }
}

fn check_args(hurst: f64, len: usize) -> Result<()> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::config(
            "hurst",
            format!("must lie in (0, 1), got {hurst}"),
        ));
    }
    if len == 0 {
        return Err(Error::Domain("fBm path length must be >= 1".into()));
    }
    Ok(())
}

thread_local! {
    static GENERATORS: RefCell<HashMap<(u64, usize), FbmGenerator>> = RefCell::new(HashMap::new());
}

fn cached_generator(hurst: f64, len: usize) -> Result<FbmGenerator> {
    GENERATORS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some(g) = cache.get(&(hurst.to_bits(), len)) {
            return Ok(g.clone());
        }
        let g = FbmGenerator::new(hurst, len)?;
        cache.insert((hurst.to_bits(), len), g.clone());
        Ok(g)
    })
}

fn path_increments(spec: &FbmSpec, len: u64, stream: &RngStream) -> Result<Vec<f64>> {
    let gen = cached_generator(spec.hurst, len as usize)?;
    gen.increments(&mut stream.substream(FBM_STREAM))
}

/// `X_{(i-1)n, in}` for `i = 1..=k` on one fBm path.
pub fn fbm_counterexample_blocks(
    spec: &FbmSpec,
    n: u64,
    k: usize,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if n == 0 || k == 0 {
        return Err(Error::Domain("fBm blocks need n >= 1 and k >= 1".into()));
    }
    if n * k as u64 > spec.n_max {
        return Err(Error::Domain(format!(
            "n * k = {} exceeds n_max = {}",
            n * k as u64,
            spec.n_max
        )));
    }
    let inc = path_increments(spec, n * k as u64, stream)?;
    Ok(inc
        .chunks(n as usize)
        .map(|c| c.iter().sum::<f64>() + spec.drift_at(n))
        .collect())
}

/// `X_{0,n}` for every `n` in `n_list` on one path of length `max(n_list)`.
pub fn fbm_origin_values(spec: &FbmSpec, n_list: &[u64], stream: &RngStream) -> Result<Vec<f64>> {
    spec.validate()?;
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::config("n_list", "must be nonempty"))?;
    if n_list.contains(&0) {
        return Err(Error::Domain("scales must be positive".into()));
    }
    if n_max > spec.n_max {
        return Err(Error::Domain(format!(
            "scale {n_max} exceeds n_max = {}",
            spec.n_max
        )));
    }
    let inc = path_increments(spec, n_max, stream)?;
    let mut cum = Vec::with_capacity(inc.len() + 1);
    cum.push(0.0);
    for x in &inc {
        cum.push(cum.last().unwrap() + x);
    }
    Ok(n_list
        .iter()
        .map(|&n| cum[n as usize] + spec.drift_at(n))
        .collect())
}
