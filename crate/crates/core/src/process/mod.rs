//! Shared domain types: time grids, sample paths, ensembles, process
//! parameters and deterministic drift.

mod drift;
mod ensemble;
mod grid;
mod path;
mod spec;

pub use drift::{apply_drift, remove_drift, DriftSpec};
pub use ensemble::Ensemble;
pub use grid::{make_grid, GridKind, TimeGrid};
pub use path::SamplePath;
pub use spec::{DiffusionShape, ProcessKind, ProcessSpec};
