//! CSV ingestion of empirical series and export of ensembles.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use hurstlab_core::{Ensemble, SamplePath, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{AtStage, CliError, Result, Stage};
use crate::json::format_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Layout {
    /// One value per row; times are 1, 2, ..., n and there is one path.
    SingleColumn,
    /// Long format with columns `path_id,t,x`.
    #[value(name = "path_id_t_x")]
    PathIdTX,
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_owned(),
        line,
        message: message.into(),
    }
}

fn csv_error(path: &Path, source: csv::Error) -> CliError {
    match source.position() {
        Some(pos) => parse_error(path, pos.line(), source.to_string()),
        None => CliError::Csv {
            path: path.to_owned(),
            source,
        },
    }
}

fn parse_cell(path: &Path, line: u64, column: &str, cell: &str) -> Result<f64> {
    let value: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("column {column}: {cell:?} is not a number")))?;
    if !value.is_finite() {
        return Err(parse_error(path, line, format!("column {column}: {cell:?} is not finite")));
    }
    Ok(value)
}

/// Reads an ensemble from a CSV file with a mandatory header row.
pub fn import_series(path: &Path, layout: Layout) -> Result<Ensemble> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    match layout {
        Layout::SingleColumn => import_single_column(path, &mut reader),
        Layout::PathIdTX => import_long(path, &mut reader),
    }
}

fn import_single_column(path: &Path, reader: &mut csv::Reader<std::fs::File>) -> Result<Ensemble> {
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 1 {
            return Err(parse_error(path, line, format!("expected 1 column, found {}", record.len())));
        }
        values.push(parse_cell(path, line, "1", &record[0])?);
    }
    if values.len() < 2 {
        return Err(parse_error(path, 1, "a series needs at least 2 values"));
    }
    let grid = Arc::new(TimeGrid::new((1..=values.len()).map(|i| i as f64).collect()).at(Stage::Import)?);
    let sample = SamplePath::new(grid.clone(), values).at(Stage::Import)?;
    Ensemble::new(grid, vec![sample], 0, None).at(Stage::Import)
}

fn import_long(path: &Path, reader: &mut csv::Reader<std::fs::File>) -> Result<Ensemble> {
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_error(path, 1, format!("missing column {name}")))
    };
    let (id_col, t_col, x_col) = (column("path_id")?, column("t")?, column("x")?);

    let mut order: Vec<String> = Vec::new();
    let mut series: HashMap<String, (Vec<f64>, Vec<f64>)> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[id_col].to_string();
        let t = parse_cell(path, line, "t", &record[t_col])?;
        let x = parse_cell(path, line, "x", &record[x_col])?;
        let entry = series.entry(id.clone()).or_insert_with(|| {
            order.push(id);
            (Vec::new(), Vec::new())
        });
        entry.0.push(t);
        entry.1.push(x);
    }
    let Some(first) = order.first() else {
        return Err(parse_error(path, 1, "no data rows"));
    };
    let reference_times = series[first].0.clone();
    let grid = Arc::new(TimeGrid::new(reference_times).at(Stage::Import)?);
    let mut paths = Vec::with_capacity(order.len());
    for id in &order {
        let (times, values) = series.remove(id).expect("every id was inserted");
        if times != grid.times() {
            return Err(CliError::RaggedPath {
                path: path.to_owned(),
                path_id: id.clone(),
                reference: first.clone(),
            });
        }
        paths.push(SamplePath::new(grid.clone(), values).at(Stage::Import)?);
    }
    Ensemble::new(grid, paths, 0, None).at(Stage::Import)
}

/// Writes `path_id,t,x` rows, path by path, with exact float rendering.
pub fn write_paths<W: Write>(e: &Ensemble, out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["path_id", "t", "x"])?;
    let times = e.grid().times();
    for (i, p) in e.paths().iter().enumerate() {
        let id = i.to_string();
        for (t, x) in times.iter().zip(p.values()) {
            writer.write_record([id.as_str(), &format_f64(*t), &format_f64(*x)])?;
        }
    }
    writer.flush()
}

pub fn export_paths(e: &Ensemble, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    write_paths(e, std::io::BufWriter::new(file)).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
