//! CSV and JSON writers. Every file carries a header row; matrices have `r`
//! down the rows and `T` across the columns.

use std::fs;
use std::path::{Path, PathBuf};

use chainbath::SpectralDensity;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::sweep::{DistanceScan, PhaseDiagram, TimeSeries};

pub const SERIES_CSV: &str = "series.csv";
pub const SERIES_JSON: &str = "series.json";
pub const PHASE_EN_CSV: &str = "phase_eN.csv";
pub const PHASE_LABELS_CSV: &str = "phase_labels.csv";
pub const PHASE_JSON: &str = "phase.json";
pub const DISTANCE_CSV: &str = "distance_scan.csv";
pub const DISTANCE_JSON: &str = "distance_scan.json";

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::Csv {
        path: path.to_path_buf(),
        source: e,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Csv {
        path: path.to_path_buf(),
        source: e,
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_matrix<T: ToString>(
    path: &Path,
    r_grid: &[f64],
    t_grid: &[f64],
    cell: impl Fn(usize, usize) -> T,
) -> Result<()> {
    let mut w = csv_writer(path)?;
    let header = std::iter::once("r\\T".to_string()).chain(t_grid.iter().map(f64::to_string));
    w.write_record(header).map_err(csv_err(path))?;
    for (i, r) in r_grid.iter().enumerate() {
        let row = std::iter::once(r.to_string())
            .chain((0..t_grid.len()).map(|j| cell(i, j).to_string()));
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `series.csv` plus `series.json` with the classification and metadata.
pub fn write_time_series(dir: &Path, series: &TimeSeries) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let csv_path = dir.join(SERIES_CSV);
    write_rows(&csv_path, &series.rows)?;
    #[derive(Serialize)]
    struct Summary<'a> {
        r: f64,
        #[serde(rename = "T")]
        temperature: f64,
        stats: &'a crate::sweep::CellStats,
        metadata: &'a crate::sweep::RunMetadata,
    }
    let json_path = dir.join(SERIES_JSON);
    write_json(
        &json_path,
        &Summary {
            r: series.r,
            temperature: series.temperature,
            stats: &series.stats,
            metadata: &series.metadata,
        },
    )?;
    Ok(vec![csv_path, json_path])
}

pub fn write_phase_diagram(dir: &Path, diagram: &PhaseDiagram) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let (r, t) = (&diagram.r_grid, &diagram.temperature_grid);
    let en = dir.join(PHASE_EN_CSV);
    write_matrix(&en, r, t, |i, j| diagram.cells[i][j].mean)?;
    let labels = dir.join(PHASE_LABELS_CSV);
    write_matrix(&labels, r, t, |i, j| diagram.cells[i][j].label)?;
    let meta = dir.join(PHASE_JSON);
    write_json(&meta, diagram)?;
    Ok(vec![en, labels, meta])
}

pub fn write_distance_scan(dir: &Path, scan: &DistanceScan) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let table = dir.join(DISTANCE_CSV);
    write_rows(&table, &scan.rows)?;
    let meta = dir.join(DISTANCE_JSON);
    write_json(&meta, scan)?;
    Ok(vec![table, meta])
}

/// `spectrum_<branch>_lines.csv` (omega, weight) and
/// `spectrum_<branch>_smoothed.csv` (omega, J_smoothed).
pub fn write_spectrum(dir: &Path, density: &SpectralDensity, points: usize) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    #[derive(Serialize)]
    struct Line {
        omega: f64,
        weight: f64,
    }
    #[derive(Serialize)]
    struct Smoothed {
        omega: f64,
        #[serde(rename = "J_smoothed")]
        value: f64,
    }
    let branch = density.branch();
    let lines_path = dir.join(format!("spectrum_{branch}_lines.csv"));
    let lines: Vec<Line> = density
        .lines()
        .iter()
        .map(|l| Line {
            omega: l.omega,
            weight: l.weight,
        })
        .collect();
    write_rows(&lines_path, &lines)?;
    let smooth_path = dir.join(format!("spectrum_{branch}_smoothed.csv"));
    let smooth: Vec<Smoothed> = density
        .sampled(points)
        .into_iter()
        .map(|(omega, value)| Smoothed { omega, value })
        .collect();
    write_rows(&smooth_path, &smooth)?;
    Ok(vec![lines_path, smooth_path])
}
