use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{fmt_g12, rounded_json, scale_csv};
use crate::diagnostics::{
    blocking_decomposition, clt_lower_tail_check, covariance_profile, key_inequality_check,
    variance_ratio_scan, CovarianceProfile,
};
use crate::error::{Error, Result};
use crate::exponents::{exponent_report, run_sweep, theorem_consistency_report, Verdict};
use crate::lattice::BlockMatrix;
use crate::models::{replicate, ModelSpec};
use crate::tracy_widom::{f2_cdf, ode_residual, painleve_q, tw_moments};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const REPORT_FILE: &str = "report.json";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleCount {
    pub n: u64,
    pub replicas: usize,
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub kind: String,
    pub seed: u64,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    pub replicas_per_scale: Vec<ScaleCount>,
    /// Every file written, including this manifest.
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub verdict: Option<Verdict>,
}

/// Files are assembled in memory and written only once every computation
/// has succeeded, so a failed run leaves nothing behind.
struct Output {
    files: Vec<(String, String)>,
    counts: Vec<ScaleCount>,
    verdict: Option<Verdict>,
}

pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: &Path,
    workers: usize,
) -> Result<RunOutcome> {
    config.validate()?;
    let workers = workers.max(1);
    let start = Instant::now();
    let hash = config.hash();
    let kind = config.kind()?;
    let out = match kind {
        ExperimentKind::Sweep | ExperimentKind::Verify | ExperimentKind::Counterexample => {
            sweep_output(config, &hash, kind, workers)?
        }
        ExperimentKind::Diagnose => diagnose_output(config, &hash, workers)?,
        ExperimentKind::TwTable => tw_output(config, &hash)?,
    };

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = out.files;
    files.push((CONFIG_FILE.to_string(), config.to_toml()?));
    let mut names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
    names.push(MANIFEST_FILE.to_string());
    names.sort();
    for (name, body) in &files {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    let manifest = RunManifest {
        config_hash: hash,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        kind: kind.as_str().to_string(),
        seed: config.seed,
        workers,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        replicas_per_scale: out.counts,
        files: names,
    };
    let path = out_dir.join(MANIFEST_FILE);
    std::fs::write(
        &path,
        pretty(serde_json::to_value(&manifest).expect("manifest serializes")),
    )
    .map_err(|e| Error::io(&path, e))?;
    Ok(RunOutcome {
        manifest,
        verdict: out.verdict,
    })
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&rounded_json(v)).expect("value serializes");
    s.push('\n');
    s
}

fn sweep_output(
    config: &ExperimentConfig,
    hash: &str,
    kind: ExperimentKind,
    workers: usize,
) -> Result<Output> {
    let sweep = config.sweep()?;
    let summaries = run_sweep(&sweep, workers)?;
    if summaries.iter().all(|s| s.replicas == 0) {
        return Err(Error::Precondition(
            "empty result set: no replica produced a value".into(),
        ));
    }
    let mut files: Vec<(String, String)> = summaries
        .iter()
        .map(|s| (format!("scale_n{}.csv", s.n), scale_csv(s, &sweep.p_list)))
        .collect();
    let counts = summaries
        .iter()
        .map(|s| ScaleCount {
            n: s.n,
            replicas: s.replicas,
            excluded: s.excluded,
        })
        .collect();
    let report = exponent_report(&sweep.model, summaries, sweep.g_mode, &sweep.p_list)?;
    let mut body = json!({
        "config_hash": hash,
        "kind": kind.as_str(),
        "model": sweep.model,
        "exponents": report,
    });
    let mut verdict = None;
    if kind != ExperimentKind::Sweep {
        let c = theorem_consistency_report(&report);
        verdict = Some(c.verdict);
        body["consistency"] = serde_json::to_value(&c).expect("report serializes");
    }
    if let ModelSpec::Fbm { hurst, drift } = sweep.model {
        body["theory"] = json!({ "chi": hurst, "gamma": drift, "g": 0.0 });
    }
    files.push((REPORT_FILE.to_string(), pretty(body)));
    Ok(Output {
        files,
        counts,
        verdict,
    })
}

/// Preconditions on sample sizes skip a check rather than fail the run.
fn section<T: Serialize>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("report serializes")),
        Err(Error::Precondition(msg)) => Ok(json!({ "skipped": msg })),
        Err(e) => Err(e),
    }
}

fn covariance_csv(p: &CovarianceProfile) -> String {
    let mut out = String::from("r,cov,stderr,u_avg,u_max\n");
    for r in 0..p.cov.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r,
            fmt_g12(p.cov[r]),
            fmt_g12(p.stderr[r]),
            fmt_g12(p.u_avg[r]),
            fmt_g12(p.u_max[r])
        ));
    }
    out
}

fn diagnose_output(config: &ExperimentConfig, hash: &str, workers: usize) -> Result<Output> {
    let model = config.model()?;
    let d = config.diagnose.as_ref().expect("validated");
    let whole_n = d.n * d.k as u64;
    let rows = replicate(config.seed, config.replicas, workers, |s| {
        let blocks = model.block_values(d.n, d.k, s)?;
        let whole = model.origin_values(&[whole_n], s)?[0];
        Ok((blocks, whole))
    })?;
    let total = rows.len();
    let (values, whole): (Vec<Vec<f64>>, Vec<f64>) = rows
        .into_iter()
        .filter(|(b, w)| !w.is_nan() && b.iter().all(|v| !v.is_nan()))
        .unzip();
    let dropped = total - values.len();
    if values.is_empty() {
        return Err(Error::Precondition(
            "empty result set: every replica was dropped".into(),
        ));
    }
    let blocks = BlockMatrix::new(model.name(), d.n, d.k, values)?;

    let (g, g_source) = match model.exact_g() {
        Some(g) => (g, "exact".to_string()),
        None => {
            let per_step =
                |xs: &[f64], n: u64| xs.iter().sum::<f64>() / (xs.len() as f64 * n as f64);
            let all: Vec<f64> = blocks.values.iter().flatten().copied().collect();
            (
                per_step(&all, d.n).min(per_step(&whole, whole_n)),
                "kingman_inf".to_string(),
            )
        }
    };

    let cov = covariance_profile(&blocks, d.r_max);
    let mut files = Vec::new();
    if let Ok(p) = &cov {
        files.push(("covariance.csv".to_string(), covariance_csv(p)));
    }
    let ratio = if d.k_grid.is_empty() {
        json!({ "skipped": "no k_grid given" })
    } else {
        section(variance_ratio_scan(
            model,
            d.n,
            &d.k_grid,
            config.replicas,
            config.seed,
            workers,
            model.exact_g(),
        ))?
    };
    let body = json!({
        "config_hash": hash,
        "kind": "diagnose",
        "model": model,
        "n": d.n,
        "k": d.k,
        "replicas": blocks.replicas(),
        "dropped": dropped,
        "g": { "value": g, "provenance": g_source },
        "covariance": section(cov)?,
        "clt_lower_tail": section(clt_lower_tail_check(&blocks, &d.y_grid, config.slack))?,
        "key_inequality": section(key_inequality_check(&whole, &blocks, g, config.slack))?,
        "variance_ratio": ratio,
        "blocking": section(blocking_decomposition(&blocks))?,
    });
    files.push((REPORT_FILE.to_string(), pretty(body)));
    Ok(Output {
        files,
        counts: vec![ScaleCount {
            n: d.n,
            replicas: blocks.replicas(),
            excluded: dropped,
        }],
        verdict: None,
    })
}

fn tw_output(config: &ExperimentConfig, hash: &str) -> Result<Output> {
    let t = &config.tw;
    let sol = painleve_q(t.s_min, t.s_max, t.step)?;
    let residual = ode_residual(&sol, t.s_min.max(-8.0), t.s_max);
    let table = f2_cdf(&sol);
    let moments = tw_moments(&table, 4)?;
    let body = json!({
        "config_hash": hash,
        "kind": "tw-table",
        "grid": { "s_min": t.s_min, "s_max": t.s_max, "step": t.step },
        "mass": table.mass(),
        "mean": table.mean(),
        "variance": table.variance(),
        "q_at_0": table.q_at(0.0),
        "ode_residual": residual,
        "moments": moments,
    });
    Ok(Output {
        files: vec![
            ("tw_table.csv".to_string(), table.to_csv()),
            (REPORT_FILE.to_string(), pretty(body)),
        ],
        counts: Vec::new(),
        verdict: None,
    })
}
