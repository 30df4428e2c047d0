//! The generate → analyze → report pipeline.

use std::path::Path;

use hurstlab_core::scaling::{data_collapse, moment_scaling, variance_curve};
use hurstlab_core::structure::{structure_report, TransitionKernel};
use hurstlab_core::{generate, Ensemble};

use crate::config::RunConfig;
use crate::error::{AtStage, CliError, Result, Stage};
use crate::io::import_series;
use crate::report::{CollapseSummary, ModelParameters, Report, VarianceTable, TOOL_NAME, TOOL_VERSION};

/// Runs `f` on a pool with `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Produces the analysis ensemble: imported, or generated and detrended.
pub fn ensemble_for(config: &RunConfig) -> Result<Ensemble> {
    if let Some(input) = &config.input {
        let e = import_series(&input.path, input.layout)?;
        config.validate_for_grid(e.grid())?;
        return Ok(e);
    }
    let grid = config.grid.build()?;
    let spec = config.process_spec()?;
    let e = generate(&spec, &grid, config.paths, config.seed, config.substeps).at(Stage::Generate)?;
    match &config.drift {
        Some(drift) if !drift.is_zero() => e.remove_drift(drift).at(Stage::Detrend),
        _ => Ok(e),
    }
}

/// Validates `config`, then generates or imports and analyzes.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    with_workers(config.workers, || {
        let e = ensemble_for(config)?;
        analyze(config, &e)
    })?
}

/// Runs and writes the report files into `dir`.
pub fn run_to_dir(config: &RunConfig, dir: &Path) -> Result<Report> {
    let report = run(config)?;
    report.write_to(dir)?;
    Ok(report)
}

/// Applies the configured analyses to `e`.
pub fn analyze(config: &RunConfig, e: &Ensemble) -> Result<Report> {
    let a = &config.analysis;
    let imported = config.input.is_some();
    let needs_model_fit = imported && (a.collapse || a.structure);

    let curve = if a.variance_fit || needs_model_fit {
        Some(variance_curve(e).at(Stage::VarianceFit)?)
    } else {
        None
    };
    let fit = curve.as_ref().map(|c| c.fit()).transpose().at(Stage::VarianceFit)?;
    let model = match (&fit, imported) {
        (Some(f), true) => ModelParameters {
            hurst: f.h_hat,
            c: f.c_hat,
            fitted: true,
        },
        _ => ModelParameters {
            hurst: config.hurst,
            c: config.c,
            fitted: false,
        },
    };
    let moment_fits = a
        .moment_orders
        .iter()
        .map(|&n| moment_scaling(e, n))
        .collect::<hurstlab_core::Result<Vec<_>>>()
        .at(Stage::Moments)?;

    let collapse = if a.collapse {
        let times: Vec<f64> = if a.collapse_times.is_empty() {
            e.grid().times().iter().copied().filter(|&t| t > 0.0).collect()
        } else {
            a.collapse_times.clone()
        };
        Some(CollapseSummary::new(data_collapse(e, model.hurst, &times).at(Stage::Collapse)?))
    } else {
        None
    };

    let structure = if a.structure {
        let kernel = TransitionKernel::new(model.hurst, model.c).at(Stage::Structure)?;
        Some(structure_report(e, &config.probes, kernel).at(Stage::Structure)?)
    } else {
        None
    };

    Ok(Report {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        seed: config.seed,
        config: config.echo(),
        grid: e.grid().times().to_vec(),
        n_paths: e.n_paths(),
        model,
        variance_curve: if a.variance_fit { curve.as_ref().map(VarianceTable::from) } else { None },
        hurst_fit: if a.variance_fit { fit } else { None },
        moment_fits,
        collapse,
        structure,
    })
}
