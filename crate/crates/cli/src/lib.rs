//! Configuration, CSV ingestion, the analysis pipeline and report emission
//! behind the `hurstlab` command.

pub mod compare;
pub mod config;
pub mod demo;
pub mod error;
pub mod io;
pub mod json;
pub mod report;
pub mod run;

pub use compare::{compare, Comparison};
pub use config::{AnalysisConfig, GridConfig, InputConfig, RunConfig};
pub use demo::{demo, demo_config, DemoOutcome, DEMO_SEED};
pub use error::{CliError, Result, Stage};
pub use io::{export_paths, import_series, write_paths, Layout};
pub use report::{CollapseSummary, ModelParameters, Report, VarianceTable};
pub use run::{analyze, ensemble_for, run, run_to_dir, with_workers};
