use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exponents::{GMode, ScaleSweep, DEFAULT_P_LIST, MIN_FIT_REPLICAS};
use crate::models::ModelSpec;
use crate::tracy_widom::{DEFAULT_STEP, DEFAULT_S_MAX, DEFAULT_S_MIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sweep,
    Diagnose,
    Verify,
    TwTable,
    Counterexample,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Diagnose => "diagnose",
            ExperimentKind::Verify => "verify",
            ExperimentKind::TwTable => "tw-table",
            ExperimentKind::Counterexample => "counterexample",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseSettings {
    /// Block scale.
    pub n: u64,
    /// Number of blocks per replica.
    pub k: usize,
    #[serde(default = "default_r_max")]
    pub r_max: usize,
    #[serde(default = "default_y_grid")]
    pub y_grid: Vec<f64>,
    /// Multipliers for the variance-ratio scan; empty skips it.
    #[serde(default)]
    pub k_grid: Vec<u64>,
}

fn default_r_max() -> usize {
    4
}

fn default_y_grid() -> Vec<f64> {
    vec![-2.0, -1.0, -0.5, 0.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwSettings {
    #[serde(default = "default_s_min")]
    pub s_min: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_s_min() -> f64 {
    DEFAULT_S_MIN
}
fn default_s_max() -> f64 {
    DEFAULT_S_MAX
}
fn default_step() -> f64 {
    DEFAULT_STEP
}

impl Default for TwSettings {
    fn default() -> Self {
        TwSettings {
            s_min: DEFAULT_S_MIN,
            s_max: DEFAULT_S_MAX,
            step: DEFAULT_STEP,
        }
    }
}

/// One experiment, read from a TOML (or `.json`) file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// May be left out when the subcommand names it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub n_list: Vec<u64>,
    #[serde(default = "default_p_list")]
    pub p_list: Vec<u32>,
    #[serde(default)]
    pub g_mode: GMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnose: Option<DiagnoseSettings>,
    #[serde(default)]
    pub tw: TwSettings,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_replicas() -> usize {
    1000
}

fn default_p_list() -> Vec<u32> {
    DEFAULT_P_LIST.to_vec()
}

fn default_slack() -> f64 {
    3.0
}

/// Counterexample defaults: `H = 0.8`, drift exponent `0.5`.
pub fn default_counterexample_model() -> ModelSpec {
    ModelSpec::Fbm {
        hurst: 0.8,
        drift: 0.5,
    }
}

pub const DEFAULT_COUNTEREXAMPLE_SCALES: [u64; 5] = [64, 128, 256, 512, 1024];

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind: Some(kind),
            seed: 0,
            replicas: default_replicas(),
            n_list: Vec::new(),
            p_list: default_p_list(),
            g_mode: GMode::default(),
            model: None,
            diagnose: None,
            tw: TwSettings::default(),
            slack: default_slack(),
            out_dir: None,
            workers: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(field_of(e.message()), e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("config", e.to_string()))
    }

    /// Settles `kind` against the subcommand and fills kind-specific
    /// defaults.
    pub fn resolve(mut self, subcommand: ExperimentKind) -> Result<Self> {
        match self.kind {
            Some(k) if k != subcommand => {
                return Err(Error::config(
                    "kind",
                    format!(
                        "config is for `{}` but `{}` was requested",
                        k.as_str(),
                        subcommand.as_str()
                    ),
                ))
            }
            _ => self.kind = Some(subcommand),
        }
        if subcommand == ExperimentKind::Counterexample {
            if self.model.is_none() {
                self.model = Some(default_counterexample_model());
            }
            if self.n_list.is_empty() {
                self.n_list = DEFAULT_COUNTEREXAMPLE_SCALES.to_vec();
            }
        }
        Ok(self)
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.kind
            .ok_or_else(|| Error::config("kind", "missing experiment kind"))
    }

    pub fn model(&self) -> Result<&ModelSpec> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::config("model", "this experiment needs a [model] table"))
    }

    pub fn sweep(&self) -> Result<ScaleSweep> {
        Ok(ScaleSweep {
            model: self.model()?.clone(),
            n_list: self.n_list.clone(),
            replicas: self.replicas,
            p_list: self.p_list.clone(),
            g_mode: self.g_mode,
            seed: self.seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.slack > 0.0 && self.slack.is_finite()) {
            return Err(Error::config(
                "slack",
                format!("must be positive, got {}", self.slack),
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be >= 1"));
        }
        match self.kind()? {
            ExperimentKind::Sweep | ExperimentKind::Verify => self.validate_sweep(),
            ExperimentKind::Counterexample => {
                if !matches!(self.model()?, ModelSpec::Fbm { .. }) {
                    return Err(Error::config(
                        "model",
                        "counterexample runs use the fbm model",
                    ));
                }
                self.validate_sweep()
            }
            ExperimentKind::Diagnose => {
                self.model()?.validate()?;
                let d = self.diagnose.as_ref().ok_or_else(|| {
                    Error::config("diagnose", "diagnose needs a [diagnose] table with n and k")
                })?;
                if d.n == 0 {
                    return Err(Error::config("diagnose.n", "must be >= 1"));
                }
                if d.k < d.r_max + 2 {
                    return Err(Error::config(
                        "diagnose.k",
                        format!("need k >= r_max + 2, got k = {}, r_max = {}", d.k, d.r_max),
                    ));
                }
                if let Some(y) = d.y_grid.iter().find(|y| !(**y <= 0.0)) {
                    return Err(Error::config(
                        "diagnose.y_grid",
                        format!("entries must be <= 0, got {y}"),
                    ));
                }
                if d.k_grid.contains(&0) {
                    return Err(Error::config("diagnose.k_grid", "entries must be >= 1"));
                }
                if self.replicas < 2 {
                    return Err(Error::config("replicas", "must be >= 2"));
                }
                Ok(())
            }
            ExperimentKind::TwTable => {
                let t = &self.tw;
                if !(t.s_min < 0.0 && t.s_max > 0.0 && t.step > 0.0) {
                    return Err(Error::config("tw", "need s_min < 0 < s_max and step > 0"));
                }
                Ok(())
            }
        }
    }

    fn validate_sweep(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::config("n_list", "must list at least one scale"));
        }
        if self.replicas < MIN_FIT_REPLICAS {
            return Err(Error::config(
                "replicas",
                format!("must be >= {MIN_FIT_REPLICAS}, got {}", self.replicas),
            ));
        }
        self.sweep()?.validate()
    }

    /// SHA-256 of the canonical JSON form (sorted keys), leaving out the
    /// output directory and worker count, which do not affect results.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("out_dir");
            obj.remove("workers");
        }
        let canonical = serde_json::to_string(&v).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Pulls the offending key out of a toml error message, if it names one.
fn field_of(msg: &str) -> String {
    msg.split('`').nth(1).unwrap_or("config").to_string()
}
