use std::sync::Arc;

use rayon::prelude::*;

use super::drift::{self, DriftSpec};
use super::grid::TimeGrid;
use super::path::SamplePath;
use super::spec::ProcessSpec;
use crate::error::{Error, Result};

/// N sample paths on a shared grid, plus what is needed to regenerate them.
#[derive(Debug, Clone)]
pub struct Ensemble {
    grid: Arc<TimeGrid>,
    paths: Vec<SamplePath>,
    master_seed: u64,
    spec: Option<ProcessSpec>,
}

impl Ensemble {
    /// Assembles an ensemble; every path must live on `grid`.
    ///
    /// `spec` is `None` for imported data.
    pub fn new(
        grid: Arc<TimeGrid>,
        paths: Vec<SamplePath>,
        master_seed: u64,
        spec: Option<ProcessSpec>,
    ) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        if let Some(i) = paths
            .iter()
            .position(|p| !Arc::ptr_eq(&p.grid_arc(), &grid) && p.grid() != grid.as_ref())
        {
            return Err(Error::InvalidParameter(format!(
                "path {i} does not share the ensemble grid"
            )));
        }
        Ok(Self {
            grid,
            paths,
            master_seed,
            spec,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<TimeGrid> {
        self.grid.clone()
    }

    pub fn paths(&self) -> &[SamplePath] {
        &self.paths
    }

    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn spec(&self) -> Option<&ProcessSpec> {
        self.spec.as_ref()
    }

    /// Reference value x(t0) that moments are measured from.
    pub fn origin(&self) -> f64 {
        self.spec.as_ref().map_or(0.0, |s| s.x0)
    }

    /// Values of every path at grid index `idx`.
    pub fn column(&self, idx: usize) -> Vec<f64> {
        self.paths.iter().map(|p| p.values()[idx]).collect()
    }

    /// Values of every path at time `t`, which must be on the grid.
    pub fn values_at(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.column(self.grid.require(t)?))
    }

    pub(crate) fn require_paths(&self, needed: usize) -> Result<()> {
        if self.paths.len() < needed {
            return Err(Error::InsufficientSamples {
                needed,
                got: self.paths.len(),
            });
        }
        Ok(())
    }

    pub fn apply_drift(&self, drift: &DriftSpec) -> Result<Ensemble> {
        self.map_paths(|p| drift::apply_drift(p, drift))
    }

    pub fn remove_drift(&self, drift: &DriftSpec) -> Result<Ensemble> {
        self.map_paths(|p| drift::remove_drift(p, drift))
    }

    fn map_paths<F>(&self, f: F) -> Result<Ensemble>
    where
        F: Fn(&SamplePath) -> Result<SamplePath> + Sync + Send,
    {
        let paths = self.paths.par_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            grid: self.grid.clone(),
            paths,
            master_seed: self.master_seed,
            spec: self.spec.clone(),
        })
    }
}
