use std::fs;
use std::process::Command;

use hurstlab_cli::config::{AnalysisConfig, GridConfig, InputConfig, RunConfig};
use hurstlab_cli::{compare, ensemble_for, export_paths, import_series, run, run_to_dir, CliError, Layout, Report, Stage};
use hurstlab_core::{GridKind, ProcessKind};

fn small(process: ProcessKind, seed: u64) -> RunConfig {
    RunConfig {
        process,
        paths: 600,
        seed,
        grid: GridConfig {
            kind: GridKind::Geometric,
            t_start: 1.0,
            t_end: 64.0,
            n: 7,
            extra_times: vec![0.0, 9.0],
        },
        ..RunConfig::default()
    }
}

#[test]
fn imports_long_layout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.csv");
    fs::write(&file, "path_id,t,x\n0,1,0.5\n0,2,0.25\n0,3,1\n1,1,-1\n1,2,2\n1,3,0\n").unwrap();
    let e = import_series(&file, Layout::PathIdTX).unwrap();
    assert_eq!(e.n_paths(), 2);
    assert_eq!(e.grid().times(), &[1.0, 2.0, 3.0]);
    assert_eq!(e.paths()[1].values(), &[-1.0, 2.0, 0.0]);
    assert!(e.spec().is_none());
}

#[test]
fn imports_single_column() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("series.csv");
    let body: String = (0..100).map(|i| format!("{}\n", i as f64 * 0.5)).collect();
    fs::write(&file, format!("x\n{body}")).unwrap();
    let e = import_series(&file, Layout::SingleColumn).unwrap();
    assert_eq!(e.n_paths(), 1);
    assert_eq!(e.grid().len(), 100);
    assert_eq!(e.grid().start(), 1.0);
    assert_eq!(e.grid().end(), 100.0);
    assert_eq!(e.paths()[0].values()[99], 49.5);
}

#[test]
fn ragged_paths_name_the_offender() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.csv");
    fs::write(&file, "path_id,t,x\na,1,0\na,2,0\nb7,1,0\nb7,3,0\n").unwrap();
    match import_series(&file, Layout::PathIdTX) {
        Err(CliError::RaggedPath { path_id, .. }) => assert_eq!(path_id, "b7"),
        other => panic!("expected a ragged-path error, got {other:?}"),
    }
}

#[test]
fn non_numeric_cells_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.csv");
    fs::write(&file, "path_id,t,x\n0,1,0\n0,2,oops\n").unwrap();
    match import_series(&file, Layout::PathIdTX) {
        Err(CliError::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("oops"));
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let file = dir.path().join("series.csv");
    fs::write(&file, "x\n1\n2\n\n3,4\n").unwrap();
    assert!(matches!(import_series(&file, Layout::SingleColumn), Err(CliError::Parse { .. })));
}

#[test]
fn export_then_import_reproduces_the_ensemble() {
    let config = small(ProcessKind::ScalingMarkovExact, 3);
    let e = ensemble_for(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.csv");
    export_paths(&e, &file).unwrap();
    let back = import_series(&file, Layout::PathIdTX).unwrap();
    assert_eq!(back.grid(), e.grid());
    for (a, b) in back.paths().iter().zip(e.paths()) {
        assert_eq!(a.values(), b.values());
    }
}

#[test]
fn out_of_range_hurst_fails_before_generation() {
    let config = RunConfig {
        hurst: 1.2,
        paths: usize::MAX,
        ..RunConfig::default()
    };
    let err = run(&config).unwrap_err();
    assert!(matches!(err, CliError::Core { stage: Stage::Validate, .. }), "{err}");
    assert!(err.to_string().contains("hurst"));
}

#[test]
fn stage_is_named_in_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("one.csv");
    fs::write(&file, "x\n1\n2\n3\n4\n").unwrap();
    let config = RunConfig {
        input: Some(InputConfig {
            path: file,
            layout: Layout::SingleColumn,
        }),
        grid: GridConfig::default(),
        analysis: AnalysisConfig {
            collapse: false,
            structure: false,
            moment_orders: Vec::new(),
            ..AnalysisConfig::default()
        },
        ..RunConfig::default()
    };
    let err = run(&config).unwrap_err();
    assert!(err.to_string().starts_with("variance-fit stage failed"), "{err}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to_dir(&small(ProcessKind::Fbm, 11), &dir.path().join("a")).unwrap();
    let b = run_to_dir(&small(ProcessKind::Fbm, 11), &dir.path().join("b")).unwrap();
    assert_eq!(a, b);
    for name in ["report.json", "variance_curve.csv", "collapse.csv"] {
        let x = fs::read(dir.path().join("a").join(name)).unwrap();
        let y = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let c = run(&small(ProcessKind::Fbm, 12)).unwrap();
    assert_ne!(a.to_bytes(), c.to_bytes());
}

#[test]
fn reports_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_to_dir(&small(ProcessKind::ScalingMarkovExact, 5), dir.path()).unwrap();
    let back = Report::load(&dir.path().join("report.json")).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_bytes(), report.to_bytes());
}

#[test]
fn report_contains_every_section() {
    let report = run(&small(ProcessKind::Fbm, 8)).unwrap();
    assert_eq!(report.version, env!("CARGO_PKG_VERSION"));
    assert_eq!(report.seed, 8);
    assert_eq!(report.config, small(ProcessKind::Fbm, 8));
    assert_eq!(report.grid.len(), 9);
    assert!(report.hurst_fit.is_some());
    assert_eq!(report.moment_fits.len(), 2);
    assert!(report.collapse.is_some());
    assert!(report.structure.is_some());
    let collapse_csv = report.collapse_csv().unwrap();
    let header = collapse_csv.lines().next().unwrap();
    assert!(header.starts_with("u,F_t="));
    assert!(header.ends_with(",mean"));
    assert_eq!(collapse_csv.lines().count(), 102);
    assert_eq!(report.variance_csv().unwrap().lines().next(), Some("t,variance,se"));
}

#[test]
fn report_compared_with_itself_shows_no_difference() {
    let report = run(&small(ProcessKind::Fbm, 4)).unwrap();
    let c = compare(&report, &report).unwrap();
    let h = c.hurst.unwrap();
    assert_eq!(h.difference, 0.0);
    assert!(h.indistinguishable);
    assert_eq!(c.collapse.unwrap().ks_distance, 0.0);
    let i = c.increments.unwrap();
    assert_eq!(i.correlation_difference.value, 0.0);
    assert!(!i.stationarity_differs);
    assert!(!i.martingale_differs);
}

#[test]
fn mismatched_grids_cannot_be_compared() {
    let a = run(&small(ProcessKind::Fbm, 4)).unwrap();
    let mut config = small(ProcessKind::Fbm, 4);
    config.grid.n = 4;
    config.grid.t_end = 8.0;
    let b = run(&config).unwrap();
    assert!(matches!(compare(&a, &b), Err(CliError::Incompatible(_))));
}

#[test]
fn imported_data_uses_fitted_parameters() {
    let config = small(ProcessKind::Fbm, 21);
    let e = ensemble_for(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("paths.csv");
    export_paths(&e, &file).unwrap();
    let imported = RunConfig {
        input: Some(InputConfig {
            path: file,
            layout: Layout::PathIdTX,
        }),
        ..config.clone()
    };
    let from_file = run(&imported).unwrap();
    let generated = run(&config).unwrap();
    assert!(from_file.model.fitted);
    assert_eq!(from_file.hurst_fit, generated.hurst_fit);
    assert_eq!(from_file.model.hurst, generated.hurst_fit.unwrap().h_hat);
}

fn hurstlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hurstlab")).args(args).output().unwrap()
}

#[test]
fn binary_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config_file = dir.path().join("config.json");
    small(ProcessKind::Fbm, 2).save(&config_file).unwrap();
    let out = dir.path().join("est");
    let result = hurstlab(&[
        "estimate",
        "--config",
        config_file.to_str().unwrap(),
        "--process",
        "markov-exact",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let report = Report::load(&out.join("report.json")).unwrap();
    assert_eq!(report.config.process, ProcessKind::ScalingMarkovExact);
    assert_eq!(report.seed, 9);
    assert_eq!(report.config.paths, 600);
    assert!(report.hurst_fit.is_some());
    assert!(report.structure.is_none());
}

#[test]
fn binary_rejects_invalid_hurst_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let result = hurstlab(&["estimate", "--hurst", "1.2", "--out", dir.path().to_str().unwrap()]);
    assert!(!result.status.success());
    assert!(String::from_utf8_lossy(&result.stderr).contains("validate stage failed"));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn binary_generates_and_compares() {
    let dir = tempfile::tempdir().unwrap();
    let gen_dir = dir.path().join("gen");
    let result = hurstlab(&[
        "generate",
        "--grid",
        "uniform:0:10:11",
        "--extra-times",
        "",
        "--paths",
        "50",
        "--out",
        gen_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let e = import_series(&gen_dir.join("paths.csv"), Layout::PathIdTX).unwrap();
    assert_eq!(e.n_paths(), 50);
    assert_eq!(e.grid().len(), 11);

    let a = dir.path().join("a");
    let args = |out: &str| {
        vec![
            "discriminate".to_string(),
            "--grid".into(),
            "geometric:1:16:5".into(),
            "--paths".into(),
            "400".into(),
            "--out".into(),
            out.into(),
        ]
    };
    let run_args = args(a.to_str().unwrap());
    assert!(hurstlab(&run_args.iter().map(String::as_str).collect::<Vec<_>>()).status.success());
    let report = a.join("report.json");
    let result = hurstlab(&["compare", report.to_str().unwrap(), report.to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    assert!(String::from_utf8_lossy(&result.stdout).contains("stationarity"));
}

#[test]
fn binary_ck_check_prints_small_residual() {
    let result = hurstlab(&["ck-check", "--hurst", "0.3", "--c", "2"]);
    assert!(result.status.success());
    let residual: f64 = String::from_utf8_lossy(&result.stdout).trim().parse().unwrap();
    assert!(residual < 1e-6);
}
