use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hurstlab_cli::config::{AnalysisConfig, GridConfig, InputConfig, RunConfig};
use hurstlab_cli::{compare, demo, ensemble_for, export_paths, run_to_dir, with_workers, Layout, Report, DEMO_SEED};
use hurstlab_core::structure::{ck_grid, ck_residual, TransitionKernel};
use hurstlab_core::{GridKind, ProcessKind};

#[derive(Parser)]
#[command(name = "hurstlab", version, about = "Tell fractional Brownian motion from scaling Markov processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an ensemble and write it as paths.csv.
    Generate(RunArgs),
    /// Fit the Hurst exponent from the variance and absolute moments.
    Estimate(RunArgs),
    /// Run the increment tests: correlation, stationarity, martingale, Chapman-Kolmogorov.
    Discriminate(RunArgs),
    /// Rescale one-point densities and measure the data collapse.
    Collapse(RunArgs),
    /// Chapman-Kolmogorov residual of the Gaussian scaling kernel.
    CkCheck(CkArgs),
    /// Compare two report.json files.
    Compare(CompareArgs),
    /// fBm against the scaling Markov process at H = 0.7.
    Demo(DemoArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_process)]
    process: Option<ProcessKind>,
    #[arg(long)]
    hurst: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    /// Constant diffusion shape D(u) for markov-sde.
    #[arg(long)]
    diffusion: Option<f64>,
    /// KIND:T_START:T_END:N with KIND geometric or uniform.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridConfig>,
    /// Comma-separated times added to the grid; an empty string adds none.
    #[arg(long, value_parser = parse_times)]
    extra_times: Option<TimeList>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    substeps: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// CSV file to analyze instead of generating.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "path_id_t_x")]
    layout: Layout,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CkArgs {
    #[arg(long, default_value_t = 0.7)]
    hurst: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    #[arg(long, default_value_t = 2.0)]
    t_mid: f64,
    #[arg(long, default_value_t = 4.0)]
    t: f64,
    #[arg(long, default_value_t = 2048)]
    points: usize,
}

#[derive(Args)]
struct CompareArgs {
    report_a: PathBuf,
    report_b: PathBuf,
    /// Write the comparison as JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = DEMO_SEED)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "hurstlab-demo")]
    out: PathBuf,
}

fn parse_process(s: &str) -> std::result::Result<ProcessKind, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("unknown process {s:?}; expected fbm, markov-exact or markov-sde"))
}

#[derive(Clone)]
struct TimeList(Vec<f64>);

fn parse_times(s: &str) -> std::result::Result<TimeList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<f64>().map_err(|_| format!("{v:?} is not a number")))
        .collect::<std::result::Result<_, _>>()
        .map(TimeList)
}

fn parse_grid(s: &str) -> std::result::Result<GridConfig, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [kind, t_start, t_end, n] = parts[..] else {
        return Err(format!("expected KIND:T_START:T_END:N, got {s:?}"));
    };
    let kind = match kind {
        "geometric" => GridKind::Geometric,
        "uniform" => GridKind::Uniform,
        other => return Err(format!("unknown grid kind {other:?}")),
    };
    let number = |v: &str| v.parse::<f64>().map_err(|_| format!("{v:?} is not a number"));
    Ok(GridConfig {
        kind,
        t_start: number(t_start)?,
        t_end: number(t_end)?,
        n: n.parse().map_err(|_| format!("{n:?} is not a point count"))?,
        extra_times: Vec::new(),
    })
}

impl RunArgs {
    /// Config file (or defaults) with flags applied on top.
    fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.process {
            config.process = v;
        }
        if let Some(v) = self.hurst {
            config.hurst = v;
        }
        if let Some(v) = self.c {
            config.c = v;
        }
        if let Some(v) = self.x0 {
            config.x0 = v;
        }
        if let Some(v) = self.diffusion {
            config.diffusion = Some(v);
        }
        if let Some(grid) = &self.grid {
            config.grid = GridConfig {
                extra_times: config.grid.extra_times.clone(),
                ..grid.clone()
            };
        }
        if let Some(TimeList(v)) = &self.extra_times {
            config.grid.extra_times = v.clone();
        }
        if let Some(v) = self.paths {
            config.paths = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.substeps {
            config.substeps = v;
        }
        if let Some(v) = self.workers {
            config.workers = Some(v);
        }
        if let Some(path) = &self.input {
            config.input = Some(InputConfig {
                path: path.clone(),
                layout: self.layout,
            });
        }
        if let Some(v) = &self.out {
            config.out = Some(v.clone());
        }
        Ok(config)
    }
}

fn out_dir(config: &RunConfig) -> PathBuf {
    config.out.clone().unwrap_or_else(|| PathBuf::from("hurstlab-out"))
}

/// Runs with the analyses of one subcommand switched on.
fn run_analysis(args: &RunArgs, select: impl FnOnce(&mut AnalysisConfig)) -> Result<Report> {
    let mut config = args.resolve()?;
    let mut analysis = AnalysisConfig {
        moment_orders: Vec::new(),
        ..AnalysisConfig::none()
    };
    analysis.collapse_times = config.analysis.collapse_times.clone();
    let orders = config.analysis.moment_orders.clone();
    select(&mut analysis);
    if analysis.variance_fit {
        analysis.moment_orders = orders;
    }
    config.analysis = analysis;
    let dir = out_dir(&config);
    let report = run_to_dir(&config, &dir)?;
    eprintln!("wrote {}", dir.join("report.json").display());
    Ok(report)
}

fn generate(args: &RunArgs) -> Result<()> {
    let config = RunConfig {
        analysis: AnalysisConfig::none(),
        ..args.resolve()?
    };
    if config.input.is_some() {
        bail!("generate does not take --input");
    }
    config.validate()?;
    let e = with_workers(config.workers, || ensemble_for(&config))??;
    let dir = out_dir(&config);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    export_paths(&e, &dir.join("paths.csv"))?;
    config.echo().save(&dir.join("config.json"))?;
    eprintln!("wrote {} paths to {}", e.n_paths(), dir.join("paths.csv").display());
    Ok(())
}

fn print_compare(a: &Path, b: &Path, out: Option<&Path>) -> Result<()> {
    let comparison = compare(&Report::load(a)?, &Report::load(b)?)?;
    print!("{}", comparison.table());
    if let Some(out) = out {
        std::fs::write(out, comparison.to_bytes()).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => generate(&args)?,
        Command::Estimate(args) => {
            let report = run_analysis(&args, |a| a.variance_fit = true)?;
            if let Some(fit) = report.hurst_fit {
                println!("H = {:.4} ± {:.4}, c = {:.4}", fit.h_hat, fit.h_se, fit.c_hat);
            }
            for fit in report.moment_fits {
                println!("order {}: H = {:.4} ± {:.4}", fit.moment_order, fit.h_hat, fit.h_se);
            }
        }
        Command::Discriminate(args) => {
            let report = run_analysis(&args, |a| a.structure = true)?;
            if let Some(s) = report.structure {
                let corr = s.increment_corr.estimate;
                println!("increment correlation: {:.4} ± {:.4}", corr.value, corr.se);
                println!(
                    "stationarity KS: {:.4} (critical {:.4})",
                    s.stationarity.ks.statistic, s.stationarity.ks.critical_value
                );
                let m = s.martingale.residual;
                println!("martingale residual: {:.4} ± {:.4}", m.value, m.se);
                println!("Chapman-Kolmogorov residual: {:.3e}", s.ck.residual);
            }
        }
        Command::Collapse(args) => {
            let report = run_analysis(&args, |a| a.collapse = true)?;
            if let Some(c) = report.collapse {
                println!("collapse error: {:.4}", c.collapse.collapse_error);
                println!("F(0) = {:.4} (Gaussian {:.4} ± {:.4})", c.peak, c.reference_peak, c.peak_tolerance);
            }
        }
        Command::CkCheck(args) => {
            let kernel = TransitionKernel::new(args.hurst, args.c)?;
            let grid = ck_grid(&kernel, args.t0, args.t, args.points);
            let residual = ck_residual(&kernel, args.t0, args.t_mid, args.t, &grid)?;
            println!("{residual:.6e}");
        }
        Command::Compare(args) => print_compare(&args.report_a, &args.report_b, args.out.as_deref())?,
        Command::Demo(args) => {
            let outcome = demo(args.seed, args.workers)?;
            outcome.write_to(&args.out)?;
            print!("{}", outcome.comparison.table());
        }
    }
    Ok(())
}
