//! Run configuration and its file form.

use std::path::{Path, PathBuf};

use hurstlab_core::structure::{IntervalPair, StructureProbes};
use hurstlab_core::{make_grid, DiffusionShape, DriftSpec, GridKind, ProcessKind, ProcessSpec, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{AtStage, CliError, Result, Stage};
use crate::io::Layout;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub kind: GridKind,
    pub t_start: f64,
    pub t_end: f64,
    pub n: usize,
    /// Times merged into the generated grid, e.g. 0 or probe times.
    pub extra_times: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            kind: GridKind::Geometric,
            t_start: 1.0,
            t_end: 1024.0,
            n: 11,
            extra_times: vec![0.0, 9.0],
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<TimeGrid> {
        let base = make_grid(self.kind, self.t_start, self.t_end, self.n).at(Stage::Validate)?;
        if self.extra_times.is_empty() {
            return Ok(base);
        }
        base.with_points(&self.extra_times).at(Stage::Validate)
    }
}

/// Which analyses a run performs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub variance_fit: bool,
    /// Orders n of the ⟨|x - x0|ⁿ⟩ scaling fits.
    pub moment_orders: Vec<u32>,
    pub collapse: bool,
    /// Times entering the data collapse; empty means every positive grid time.
    pub collapse_times: Vec<f64>,
    pub structure: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            variance_fit: true,
            moment_orders: vec![1, 4],
            collapse: true,
            collapse_times: Vec::new(),
            structure: true,
        }
    }
}

impl AnalysisConfig {
    pub fn none() -> Self {
        Self {
            variance_fit: false,
            moment_orders: Vec::new(),
            collapse: false,
            collapse_times: Vec::new(),
            structure: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub path: PathBuf,
    pub layout: Layout,
}

/// Everything a run needs. Generation is skipped when `input` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub process: ProcessKind,
    pub hurst: f64,
    pub c: f64,
    pub x0: f64,
    /// Constant D(u) for the SDE generator; `None` means 2Hc.
    pub diffusion: Option<f64>,
    pub drift: Option<DriftSpec>,
    pub substeps: usize,
    pub grid: GridConfig,
    pub paths: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub analysis: AnalysisConfig,
    pub probes: StructureProbes,
    pub input: Option<InputConfig>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            process: ProcessKind::Fbm,
            hurst: 0.7,
            c: 1.0,
            x0: 0.0,
            diffusion: None,
            drift: None,
            substeps: 64,
            grid: GridConfig::default(),
            paths: 4096,
            seed: 1,
            workers: None,
            analysis: AnalysisConfig::default(),
            probes: StructureProbes::default(),
            input: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("configs always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })
    }

    /// The process spec this config generates.
    pub fn process_spec(&self) -> Result<ProcessSpec> {
        let mut spec = ProcessSpec::new(self.process, self.hurst, self.c)
            .at(Stage::Validate)?
            .with_x0(self.x0);
        if let Some(d) = self.diffusion {
            spec = spec.with_diffusion(DiffusionShape::Constant(d)).at(Stage::Validate)?;
        }
        if let Some(drift) = &self.drift {
            spec = spec.with_drift(drift.clone());
        }
        Ok(spec)
    }

    /// The echo stored in reports: execution-only settings (worker count,
    /// output directory) are cleared so they cannot change report bytes.
    pub fn echo(&self) -> Self {
        Self {
            workers: None,
            out: None,
            ..self.clone()
        }
    }

    /// Checks everything that can be checked without data. Grid-dependent
    /// checks run here for generated runs and after import otherwise.
    pub fn validate(&self) -> Result<()> {
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if let Some(input) = &self.input {
            if !input.path.is_file() {
                return Err(CliError::Config(format!(
                    "input file {} does not exist",
                    input.path.display()
                )));
            }
            self.validate_analysis()?;
            return Ok(());
        }
        let spec = self.process_spec()?;
        if self.paths < 2 {
            return Err(CliError::Config(format!("paths must be at least 2, got {}", self.paths)));
        }
        if self.process == ProcessKind::ScalingMarkovSde && self.substeps == 0 {
            return Err(CliError::Config("substeps must be at least 1".into()));
        }
        let grid = self.grid.build()?;
        if self.process == ProcessKind::ScalingMarkovSde && spec.hurst < 0.5 && grid.start() <= 0.0 {
            return Err(CliError::Config(format!(
                "the SDE generator with hurst {} < 0.5 needs a grid starting after t = 0",
                spec.hurst
            )));
        }
        if let Some(drift) = &self.drift {
            drift.cumulative_integral(&grid).at(Stage::Validate)?;
        }
        self.validate_analysis()?;
        self.validate_for_grid(&grid)
    }

    fn validate_analysis(&self) -> Result<()> {
        let a = &self.analysis;
        if let Some(n) = a.moment_orders.iter().find(|&&n| n == 0) {
            return Err(CliError::Config(format!("moment order must be at least 1, got {n}")));
        }
        if a.structure {
            let p = &self.probes;
            let IntervalPair { t1, lag1, t2, lag2 } = p.correlation;
            if !(lag1 > 0.0 && lag2 > 0.0) {
                return Err(CliError::Config("correlation probe lags must be positive".into()));
            }
            if !(t1 <= t2 || t2 + lag2 <= t1 - lag1) {
                return Err(CliError::Config(format!(
                    "correlation intervals [{}, {t1}] and [{t2}, {}] overlap",
                    t1 - lag1,
                    t2 + lag2
                )));
            }
            if !(p.stationarity.lag > 0.0 && p.martingale.lag > 0.0) {
                return Err(CliError::Config("probe lags must be positive".into()));
            }
            let ck = p.ck;
            if !(0.0 <= ck.t0 && ck.t0 < ck.t_mid && ck.t_mid < ck.t) {
                return Err(CliError::Config(format!(
                    "Chapman-Kolmogorov probe needs 0 <= t0 < t_mid < t, got {}, {}, {}",
                    ck.t0, ck.t_mid, ck.t
                )));
            }
            if ck.grid_points < 3 {
                return Err(CliError::Config("Chapman-Kolmogorov grid needs at least 3 points".into()));
            }
        }
        Ok(())
    }

    /// Checks that every probe and collapse time lies on `grid`.
    pub fn validate_for_grid(&self, grid: &TimeGrid) -> Result<()> {
        let a = &self.analysis;
        if a.collapse {
            let positive = grid.times().iter().filter(|&&t| t > 0.0).count();
            if a.collapse_times.is_empty() && positive < 2 {
                return Err(CliError::Config("data collapse needs at least two positive grid times".into()));
            }
            check_on_grid(grid, &a.collapse_times, "collapse time")?;
        }
        if a.structure {
            check_on_grid(grid, &self.probes.required_times(), "structure probe time")?;
        }
        if (a.variance_fit || !a.moment_orders.is_empty()) && grid.times().iter().filter(|&&t| t > 0.0).count() < 3 {
            return Err(CliError::Config("scaling fits need at least three positive grid times".into()));
        }
        Ok(())
    }
}

fn check_on_grid(grid: &TimeGrid, times: &[f64], what: &str) -> Result<()> {
    match times.iter().find(|&&t| grid.index_of(t).is_none()) {
        Some(t) => Err(CliError::Config(format!("{what} {t} is not on the grid"))),
        None => Ok(()),
    }
}
