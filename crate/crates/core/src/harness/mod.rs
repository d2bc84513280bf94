//! Config-driven experiment runner behind the command line tool.

mod config;
mod report;
mod run;

pub use config::{
    default_counterexample_model, DiagnoseSettings, ExperimentConfig, ExperimentKind, TwSettings,
    DEFAULT_COUNTEREXAMPLE_SCALES,
};
pub use report::{fmt_g12, rounded_json, scale_csv, scale_csv_header};
pub use run::{run_experiment, RunManifest, RunOutcome, MANIFEST_FILE, REPORT_FILE};
