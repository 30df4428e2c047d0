use std::sync::Arc;

use super::drift::DriftSpec;
use super::grid::TimeGrid;
use crate::error::{Error, Result};

/// One realization x(t) on a time grid.
///
/// A path produced by `apply_drift` remembers its pre-drift values so the
/// matching `remove_drift` can restore them exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: Arc<TimeGrid>,
    values: Vec<f64>,
    detrended: bool,
    undo: Option<Box<(DriftSpec, SamplePath)>>,
}

impl SamplePath {
    pub fn new(grid: Arc<TimeGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "path has {} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            detrended: false,
            undo: None,
        })
    }

    /// A generated, drift-free path.
    pub(crate) fn martingale(grid: Arc<TimeGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self {
            grid,
            values,
            detrended: true,
            undo: None,
        }
    }

    pub(crate) fn with_undo(prior: &SamplePath, values: Vec<f64>, drift: DriftSpec) -> Self {
        Self {
            grid: prior.grid.clone(),
            values,
            detrended: false,
            undo: Some(Box::new((drift, prior.clone()))),
        }
    }

    pub(crate) fn undo_for(&self, drift: &DriftSpec) -> Option<&SamplePath> {
        self.undo
            .as_deref()
            .filter(|(d, _)| d == drift)
            .map(|(_, p)| p)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<TimeGrid> {
        self.grid.clone()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn detrended(&self) -> bool {
        self.detrended
    }

    pub fn set_detrended(&mut self, detrended: bool) {
        self.detrended = detrended;
    }
}
