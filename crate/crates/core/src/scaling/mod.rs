//! One-point statistics: ensemble averages, variance and moment scaling
//! fits for H, histogram densities, and data collapse.

mod collapse;
mod density;
mod fit;
mod observable;

pub use collapse::{data_collapse, CollapseReport, RescaledCurve, U_GRID_COVERAGE, U_GRID_POINTS};
pub use density::{histogram, one_point_density, Binning, DensityEstimate, MIN_SAMPLES_DEFAULT_BINNING};
pub use fit::{fit_hurst_variance, moment_scaling, variance_curve, HurstFit, VarianceCurve};
pub use observable::{ensemble_average, Observable};
