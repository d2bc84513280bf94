//! Estimators for the time constant `g`, the fluctuation exponents `chi_p`
//! and the mean-gap exponent `gamma` from sweeps over a ladder of scales.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{replicate, ModelSpec, Orientation};
use crate::stats::{fit_loglog, ols, ExponentFit, SampleMoments};

pub const MIN_FIT_REPLICAS: usize = 100;
pub const DEFAULT_P_LIST: [u32; 2] = [2, 4];
/// Slack on `gamma >= chi - tol` in the consistency verdict.
pub const CONSISTENCY_TOL: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GMode {
    #[default]
    Exact,
    KingmanInf,
    Extrapolate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSweep {
    pub model: ModelSpec,
    pub n_list: Vec<u64>,
    pub replicas: usize,
    pub p_list: Vec<u32>,
    pub g_mode: GMode,
    pub seed: u64,
}

impl ScaleSweep {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.n_list.is_empty() || self.n_list[0] == 0 {
            return Err(Error::config(
                "n_list",
                "must be nonempty with positive scales",
            ));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("n_list", "must be strictly increasing"));
        }
        if self.replicas < MIN_FIT_REPLICAS {
            return Err(Error::Precondition(format!(
                "exponent fits need at least {MIN_FIT_REPLICAS} replicas, got {}",
                self.replicas
            )));
        }
        if self.p_list.is_empty() || self.p_list.contains(&0) {
            return Err(Error::config("p_list", "must be nonempty with p >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub p: u32,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSummary {
    pub n: u64,
    pub replicas: usize,
    /// Replicas dropped because the model produced no value (e.g. extinction).
    pub excluded: usize,
    pub mean: f64,
    pub stderr_mean: f64,
    pub var: f64,
    pub stderr_var: f64,
    pub norms: Vec<NormEstimate>,
    /// `ok`, `degenerate` (zero variance) or `empty`.
    pub status: String,
}

impl ScaleSummary {
    pub fn norm(&self, p: u32) -> Option<&NormEstimate> {
        self.norms.iter().find(|e| e.p == p)
    }
}

/// Per-scale statistics; NaN entries count as excluded.
pub fn summarize_scale(n: u64, values: &[f64], p_list: &[u32]) -> ScaleSummary {
    let xs: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    let excluded = values.len() - xs.len();
    let m = SampleMoments::from_slice(&xs);
    let norms = p_list
        .iter()
        .map(|&p| {
            let (value, stderr) = norm_with_stderr(&xs, m.mean(), p);
            NormEstimate { p, value, stderr }
        })
        .collect();
    let status = if xs.is_empty() {
        "empty"
    } else if m.variance() > 0.0 {
        "ok"
    } else {
        "degenerate"
    };
    ScaleSummary {
        n,
        replicas: xs.len(),
        excluded,
        mean: if xs.is_empty() { f64::NAN } else { m.mean() },
        stderr_mean: m.stderr_mean(),
        var: m.variance(),
        stderr_var: m.stderr_variance(),
        norms,
        status: status.to_string(),
    }
}

/// `(mean |x - c|^p)^(1/p)` with a delta-method standard error.
fn norm_with_stderr(xs: &[f64], center: f64, p: u32) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let a: Vec<f64> = xs
        .iter()
        .map(|x| (x - center).abs().powi(p as i32))
        .collect();
    let am = SampleMoments::from_slice(&a);
    let mp = am.mean();
    if !(mp > 0.0) {
        return (0.0, 0.0);
    }
    let value = mp.powf(1.0 / p as f64);
    (value, value / (p as f64 * mp) * am.stderr_mean())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GEstimate {
    pub value: f64,
    pub stderr: f64,
    pub provenance: String,
}

pub fn estimate_g(
    summaries: &[ScaleSummary],
    mode: GMode,
    exact: Option<f64>,
) -> Result<GEstimate> {
    match mode {
        GMode::Exact => exact
            .map(|value| GEstimate {
                value,
                stderr: 0.0,
                provenance: "exact".into(),
            })
            .ok_or_else(|| {
                Error::Precondition(
                    "no closed-form time constant for this model; use kingman_inf or extrapolate"
                        .into(),
                )
            }),
        GMode::KingmanInf => {
            let best = summaries
                .iter()
                .filter(|s| s.mean.is_finite())
                .min_by(|a, b| (a.mean / a.n as f64).total_cmp(&(b.mean / b.n as f64)))
                .ok_or_else(|| {
                    Error::Precondition("kingman_inf needs at least one scale".into())
                })?;
            Ok(GEstimate {
                value: best.mean / best.n as f64,
                stderr: best.stderr_mean / best.n as f64,
                provenance: format!("kingman_inf (attained at n = {})", best.n),
            })
        }
        GMode::Extrapolate => extrapolate(summaries),
    }
}

/// Fits `mean/n = g + c n^theta`, `theta < 0`, through the top three scales.
fn extrapolate(summaries: &[ScaleSummary]) -> Result<GEstimate> {
    if summaries.len() < 3 {
        return Err(Error::Precondition(
            "extrapolation needs at least 3 scales".into(),
        ));
    }
    let top = &summaries[summaries.len() - 3..];
    let n: Vec<f64> = top.iter().map(|s| s.n as f64).collect();
    let a: Vec<f64> = top.iter().map(|s| s.mean / s.n as f64).collect();
    let se: Vec<f64> = top.iter().map(|s| s.stderr_mean / s.n as f64).collect();
    let d12 = a[0] - a[1];
    let d23 = a[1] - a[2];
    let s12 = (se[0].powi(2) + se[1].powi(2)).sqrt();
    let s23 = (se[1].powi(2) + se[2].powi(2)).sqrt();
    let flat = GEstimate {
        value: a[2],
        stderr: se[2],
        provenance: format!(
            "extrapolate (no resolved trend; top scale n = {})",
            top[2].n
        ),
    };
    if d12.abs() <= 2.0 * s12 || d23.abs() <= 2.0 * s23 {
        return Ok(flat);
    }
    if d12.signum() != d23.signum() {
        return Err(Error::Numerical(format!(
            "extrapolation ill-conditioned: mean/n is not monotone over n = {}, {}, {}",
            top[0].n, top[1].n, top[2].n
        )));
    }
    let target = d12 / d23;
    let ratio =
        |theta: f64| (n[0].powf(theta) - n[1].powf(theta)) / (n[1].powf(theta) - n[2].powf(theta));
    // ratio(theta) increases from ln(n1/n0)/ln(n2/n1) at theta -> 0 to infinity.
    let (mut lo, mut hi) = (-20.0, -1e-9);
    if !(target > ratio(hi) && target < ratio(lo)) {
        return Err(Error::Numerical(format!(
            "extrapolation ill-conditioned: difference ratio {target} has no decaying power-law fit"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let w = n[2].powf(theta) / (n[1].powf(theta) - n[2].powf(theta));
    let value = (1.0 + w) * a[2] - w * a[1];
    let stderr = ((1.0 + w).powi(2) * se[2].powi(2) + w.powi(2) * se[1].powi(2)).sqrt();
    Ok(GEstimate {
        value,
        stderr,
        provenance: format!("extrapolate (theta = {theta:.4})"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Fit { fit: ExponentFit },
    Undefined { reason: String },
}

impl FitOutcome {
    pub fn fit(&self) -> Option<&ExponentFit> {
        match self {
            FitOutcome::Fit { fit } => Some(fit),
            FitOutcome::Undefined { .. } => None,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit().map(|f| f.slope)
    }
}

/// Slope of `log ||X_{0,n} - E X_{0,n}||_p` against `log n`.
pub fn estimate_chi(summaries: &[ScaleSummary], p: u32) -> Result<FitOutcome> {
    if summaries.len() < 3 {
        return Ok(FitOutcome::Undefined {
            reason: "undefined (<3 scales)".into(),
        });
    }
    let mut pairs = Vec::new();
    for s in summaries {
        let est = s.norm(p).ok_or_else(|| {
            Error::Precondition(format!("p = {p} norm was not recorded at n = {}", s.n))
        })?;
        if est.value > 0.0 && est.value.is_finite() {
            pairs.push((s.n, est.value));
        }
    }
    if pairs.len() < 3 {
        return Ok(FitOutcome::Undefined {
            reason: format!("only {} scales with positive p = {p} norm", pairs.len()),
        });
    }
    Ok(FitOutcome::Fit {
        fit: fit_loglog(&pairs)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludedScale {
    pub n: u64,
    pub gap: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub outcome: FitOutcome,
    pub retained: Vec<u64>,
    pub excluded: Vec<ExcludedScale>,
}

/// Mean gap `E X_{0,n} - n g` (sub) or `n g - E X_{0,n}` (super).
pub fn mean_gap(s: &ScaleSummary, g: f64, orientation: Orientation) -> f64 {
    let ng = s.n as f64 * g;
    match orientation {
        Orientation::Sub => s.mean - ng,
        Orientation::Super => ng - s.mean,
    }
}

pub fn estimate_gamma(
    summaries: &[ScaleSummary],
    g: &GEstimate,
    orientation: Orientation,
) -> GammaFit {
    let mut retained = Vec::new();
    let mut excluded = Vec::new();
    let mut pairs = Vec::new();
    for s in summaries {
        let gap = mean_gap(s, g.value, orientation);
        let reason = if !gap.is_finite() {
            Some("no samples".to_string())
        } else if gap <= 2.0 * s.stderr_mean {
            Some(format!("gap within 2 stderr ({:.3e})", s.stderr_mean))
        } else if g.stderr > 0.0 && gap <= 10.0 * s.n as f64 * g.stderr {
            Some(format!(
                "gap within 10 n stderr(g) ({:.3e})",
                s.n as f64 * g.stderr
            ))
        } else {
            None
        };
        match reason {
            Some(reason) => excluded.push(ExcludedScale {
                n: s.n,
                gap,
                reason,
            }),
            None => {
                retained.push(s.n);
                pairs.push((s.n, gap));
            }
        }
    }
    let outcome = if summaries.len() < 3 {
        FitOutcome::Undefined {
            reason: "undefined (<3 scales)".into(),
        }
    } else if pairs.len() < 3 {
        FitOutcome::Undefined {
            reason: format!(
                "nonpositive mean gaps: {} of {} scales retained",
                pairs.len(),
                summaries.len()
            ),
        }
    } else {
        match fit_loglog(&pairs) {
            Ok(fit) => FitOutcome::Fit { fit },
            Err(e) => FitOutcome::Undefined {
                reason: e.to_string(),
            },
        }
    };
    GammaFit {
        outcome,
        retained,
        excluded,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub model: String,
    pub orientation: Orientation,
    pub g: GEstimate,
    pub chi_fits: BTreeMap<u32, FitOutcome>,
    pub gamma: GammaFit,
    pub scales: Vec<ScaleSummary>,
}

pub fn exponent_report(
    model: &ModelSpec,
    summaries: Vec<ScaleSummary>,
    g_mode: GMode,
    p_list: &[u32],
) -> Result<ExponentReport> {
    let g = estimate_g(&summaries, g_mode, model.exact_g())?;
    let mut chi_fits = BTreeMap::new();
    for &p in p_list {
        chi_fits.insert(p, estimate_chi(&summaries, p)?);
    }
    // Every model is run in its sub-additive form.
    let orientation = Orientation::Sub;
    let gamma = estimate_gamma(&summaries, &g, orientation);
    Ok(ExponentReport {
        model: model.name().to_string(),
        orientation,
        g,
        chi_fits,
        gamma,
        scales: summaries,
    })
}

/// One DP per replica covering the whole ladder; the per-scale summaries
/// are a sequential fold, so they do not depend on `workers`.
pub fn run_sweep(sweep: &ScaleSweep, workers: usize) -> Result<Vec<ScaleSummary>> {
    sweep.validate()?;
    let rows = replicate(sweep.seed, sweep.replicas, workers, |s| {
        sweep.model.origin_values(&sweep.n_list, s)
    })?;
    Ok(sweep
        .n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let col: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            summarize_scale(n, &col, &sweep.p_list)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceFlag {
    pub beta: u32,
    /// Slope of `log(Var (log n)^beta / n)` against `log n`.
    pub slope: f64,
    pub stderr: f64,
    /// Whether the data are compatible with `Var = O(n / (log n)^beta)`.
    pub compatible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenCheck {
    pub p: u32,
    pub q: u32,
    pub slope_p: f64,
    pub slope_q: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub verdict: Verdict,
    pub annotation: String,
    pub chi2: Option<f64>,
    pub chi2_stderr: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_stderr: Option<f64>,
    /// `gamma - (chi2 - CONSISTENCY_TOL)`.
    pub margin: Option<f64>,
    pub variance_flags: Vec<VarianceFlag>,
    pub jensen: Vec<JensenCheck>,
    pub assumption: String,
}

pub fn theorem_consistency_report(report: &ExponentReport) -> ConsistencyReport {
    let chi = report.chi_fits.get(&2).and_then(|f| f.fit());
    let gamma = report.gamma.outcome.fit();

    let mut jensen = Vec::new();
    let fits: Vec<(u32, &ExponentFit)> = report
        .chi_fits
        .iter()
        .filter_map(|(p, f)| f.fit().map(|f| (*p, f)))
        .collect();
    for (i, (p, fp)) in fits.iter().enumerate() {
        for (q, fq) in &fits[i + 1..] {
            let sigma = (fp.stderr_slope.powi(2) + fq.stderr_slope.powi(2)).sqrt();
            jensen.push(JensenCheck {
                p: *p,
                q: *q,
                slope_p: fp.slope,
                slope_q: fq.slope,
                ok: fp.slope <= fq.slope + 2.0 * sigma,
            });
        }
    }

    let variance_flags = variance_flags(&report.scales);

    let (mut verdict, mut annotation, margin) = match (chi, gamma) {
        (None, _) => (Verdict::Inconclusive, "chi_2 undefined".to_string(), None),
        (_, None) => (Verdict::Inconclusive, "gamma undefined".to_string(), None),
        (Some(c), Some(g)) => {
            let margin = g.slope - (c.slope - CONSISTENCY_TOL);
            if (c.slope - 0.5).abs() <= 2.0 * c.stderr_slope {
                (
                    Verdict::Inconclusive,
                    "chi_2 indistinguishable from 1/2, where the bound does not apply".to_string(),
                    Some(margin),
                )
            } else if margin >= 0.0 {
                (
                    Verdict::Consistent,
                    format!("gamma >= chi_2 - {CONSISTENCY_TOL}"),
                    Some(margin),
                )
            } else {
                (
                    Verdict::Inconsistent,
                    "inconsistent / assumption 4 violated (gamma < chi_2 - tolerance)".to_string(),
                    Some(margin),
                )
            }
        }
    };
    if verdict == Verdict::Consistent && jensen.iter().any(|j| !j.ok) {
        verdict = Verdict::Inconclusive;
        annotation = "norm exponents violate Jensen ordering".into();
    }
    ConsistencyReport {
        verdict,
        annotation,
        chi2: chi.map(|f| f.slope),
        chi2_stderr: chi.map(|f| f.stderr_slope),
        gamma: gamma.map(|f| f.slope),
        gamma_stderr: gamma.map(|f| f.stderr_slope),
        margin,
        variance_flags,
        jensen,
        assumption: "chi_2 equal to chi_(2+delta) is assumed, not tested".into(),
    }
}

fn variance_flags(scales: &[ScaleSummary]) -> Vec<VarianceFlag> {
    let usable: Vec<&ScaleSummary> = scales.iter().filter(|s| s.var > 0.0 && s.n >= 2).collect();
    if usable.len() < 3 {
        return Vec::new();
    }
    [1u32, 2]
        .iter()
        .map(|&beta| {
            let pts: Vec<(f64, f64)> = usable
                .iter()
                .map(|s| {
                    let n = s.n as f64;
                    (n.ln(), (s.var * n.ln().powi(beta as i32) / n).ln())
                })
                .collect();
            let fit = ols(pts);
            VarianceFlag {
                beta,
                slope: fit.slope,
                stderr: fit.stderr_slope,
                compatible: fit.slope <= 2.0 * fit.stderr_slope,
            }
        })
        .collect()
}
