//! Increment-level discriminators: stationarity of increments, correlation
//! of increments over non-overlapping intervals, the martingale reduction
//! ⟨x(t) x(t + T)⟩ = ⟨x²(t)⟩, transition kernels with density propagation
//! and the Chapman–Kolmogorov check, and empirical two-point densities.

mod correlation;
mod increments;
mod kernel;
mod report;
mod stationarity;
mod two_point;

pub use correlation::{
    increment_autocorrelation, martingale_residual, martingale_residual_with_bins,
    process_autocorrelation, ConditionalBin, MartingaleCheck, DEFAULT_CONDITIONAL_BINS,
};
pub use increments::{increments, IncrementSet};
pub use kernel::{
    ck_residual, ck_residual_parts, kernel_density, point_mass, propagate_density, Kernel,
    TransitionKernel, COVERAGE_SDS,
};
pub use report::{
    ck_grid, structure_report, CkCheck, CkProbe, IncrementCorrelation, IntervalPair, Probe,
    StructureProbes, StructureReport, CK_GRID_HALF_WIDTH_SDS,
};
pub use stationarity::{stationarity_test, StationarityResult, StationarityVerdict};
pub use two_point::{two_point_density, ScalingCheck, TwoPointDensity, TwoPointOptions};
