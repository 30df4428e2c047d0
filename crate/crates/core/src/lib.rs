//! Fractional Brownian motion versus scaling Gaussian Markov processes.
//!
//! Both families share the one-point law x(t) ~ N(0, c t^(2H)), so variance
//! scaling and data collapse cannot tell them apart. The increment-level
//! tests in [`structure`] can: fBm increments are stationary and correlated,
//! Markov increments are nonstationary and uncorrelated.

// `!(x > 0.0)` is used on purpose so that NaN fails parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod generators;
pub mod process;
pub mod rng;
pub mod scaling;
pub mod stats;
pub mod structure;

pub use error::{Error, Result};
pub use generators::{
    fbm_covariance, gen_fbm, gen_scaling_markov_exact, gen_scaling_markov_sde, generate,
    SdeEnsemble,
};
pub use process::{
    apply_drift, make_grid, remove_drift, DiffusionShape, DriftSpec, Ensemble, GridKind,
    ProcessKind, ProcessSpec, SamplePath, TimeGrid,
};
pub use stats::{Estimate, KsTest};
