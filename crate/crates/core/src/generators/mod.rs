//! Ensemble generators for the two competing processes.
//!
//! Path `i` draws its noise from stream `i` of the master seed, and paths are
//! collected in index order, so output never depends on the thread count.

mod covariance;
mod fbm;
mod markov;

use std::sync::Arc;

pub use covariance::{fbm_covariance, CholeskyFactor, CovarianceMatrix};
pub use fbm::gen_fbm;
pub use markov::{gen_scaling_markov_exact, gen_scaling_markov_sde, SdeEnsemble};

use crate::error::{Error, Result};
use crate::process::{Ensemble, ProcessKind, ProcessSpec, SamplePath, TimeGrid};

/// Generates an ensemble of whatever kind `spec` names.
///
/// `substeps` is only used by the SDE generator.
pub fn generate(
    spec: &ProcessSpec,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
    substeps: usize,
) -> Result<Ensemble> {
    match spec.kind {
        ProcessKind::Fbm => gen_fbm(spec, grid, n_paths, seed),
        ProcessKind::ScalingMarkovExact => gen_scaling_markov_exact(spec, grid, n_paths, seed),
        ProcessKind::ScalingMarkovSde => {
            gen_scaling_markov_sde(spec, grid, substeps, n_paths, seed).map(|r| r.ensemble)
        }
    }
}

fn check_request(spec: &ProcessSpec, kind: ProcessKind, n_paths: usize) -> Result<()> {
    spec.validate()?;
    if spec.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "generator for {kind:?} called with a {:?} spec",
            spec.kind
        )));
    }
    if n_paths < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n_paths });
    }
    Ok(())
}

fn finish(spec: &ProcessSpec, grid: Arc<TimeGrid>, paths: Vec<SamplePath>, seed: u64) -> Result<Ensemble> {
    let ensemble = Ensemble::new(grid, paths, seed, Some(spec.clone()))?;
    match &spec.drift {
        Some(drift) if !drift.is_zero() => ensemble.apply_drift(drift),
        _ => Ok(ensemble),
    }
}
