//! Built-in demonstration: fBm against the scaling Markov process at H = 0.7.

use std::path::Path;

use hurstlab_core::ProcessKind;

use crate::compare::{compare, Comparison};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::run::run;

pub const DEMO_SEED: u64 = 20_240_615;

/// The demo run for one process kind.
pub fn demo_config(process: ProcessKind, seed: u64) -> RunConfig {
    RunConfig {
        process,
        hurst: 0.7,
        c: 1.0,
        paths: 4096,
        seed,
        ..RunConfig::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOutcome {
    pub fbm: Report,
    pub markov: Report,
    pub comparison: Comparison,
}

/// Runs both demo configs with `workers` threads.
pub fn demo(seed: u64, workers: Option<usize>) -> Result<DemoOutcome> {
    let with_workers = |process| RunConfig {
        workers,
        ..demo_config(process, seed)
    };
    let fbm = run(&with_workers(ProcessKind::Fbm))?;
    let markov = run(&with_workers(ProcessKind::ScalingMarkovExact))?;
    let comparison = compare(&fbm, &markov)?;
    Ok(DemoOutcome {
        fbm,
        markov,
        comparison,
    })
}

impl DemoOutcome {
    /// Writes `fbm/`, `markov-exact/` and `comparison.json` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        self.fbm.write_to(&dir.join("fbm"))?;
        self.markov.write_to(&dir.join("markov-exact"))?;
        let file = dir.join("comparison.json");
        std::fs::write(&file, self.comparison.to_bytes()).map_err(|source| CliError::Io { path: file, source })
    }
}
