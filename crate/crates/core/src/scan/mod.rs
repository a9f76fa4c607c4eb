//! Grid sampling of the conserved totals, timing statistics, bistable point
//! clouds and their convex hull.

mod grid;
mod hull;
mod output;

pub use grid::{GridSpec, ParamRange};
pub use hull::{convex_hull_3d, orient3d, Degeneracy, Hull, Point3};
pub use output::{
    read_bistable_csv, write_csv, write_gnuplot, write_off, ScanSummary, StatsSummary,
};

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::Rat;
use crate::counter::{count_positive, CertifiedSolution, CounterConfig};
use crate::reduction::ReducedSystem;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("no records to summarise")]
    Empty,
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad input: {0}")]
    Input(String),
}

/// Outcome at one grid point. `count` is `-1` when counting failed, with
/// the reason in `error`.
#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub point: BTreeMap<String, Rat>,
    pub count: i64,
    pub elapsed_s: f64,
    pub error: Option<String>,
    pub solutions: Vec<CertifiedSolution>,
}

impl ScanRecord {
    pub fn failed(&self) -> bool {
        self.count < 0
    }
}

fn scan_point(red: &ReducedSystem, point: BTreeMap<String, Rat>, cfg: &CounterConfig) -> ScanRecord {
    let start = Instant::now();
    let outcome = count_positive(red, &point, cfg);
    let elapsed_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok(res) => ScanRecord {
            point,
            count: res.count as i64,
            elapsed_s,
            error: None,
            solutions: res.solutions,
        },
        Err(e) => ScanRecord {
            point,
            count: -1,
            elapsed_s,
            error: Some(e.to_string()),
            solutions: Vec::new(),
        },
    }
}

/// Counts positive steady states at every grid point on `workers` threads.
/// Records come back in enumeration order.
pub fn run_scan(
    red: &ReducedSystem,
    spec: &GridSpec,
    workers: usize,
    cfg: &CounterConfig,
) -> Result<Vec<ScanRecord>, ScanError> {
    let points = spec.enumerate(&red.parameters)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        points
            .into_par_iter()
            .map(|p| scan_point(red, p, cfg))
            .collect()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanStats {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
    pub max: f64,
}

/// Mean, lower median, population standard deviation and maximum.
pub fn stats(times: &[f64]) -> Result<ScanStats, ScanError> {
    if times.is_empty() {
        return Err(ScanError::Empty);
    }
    let n = times.len() as f64;
    let mean = times.iter().sum::<f64>() / n;
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / n;
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ScanStats {
        mean,
        median: sorted[(sorted.len() - 1) / 2],
        stddev: var.sqrt(),
        max: sorted[sorted.len() - 1],
    })
}

pub fn record_stats(records: &[ScanRecord]) -> Result<ScanStats, ScanError> {
    stats(&records.iter().map(|r| r.elapsed_s).collect::<Vec<_>>())
}

/// Grid points with exactly three positive steady states, as coordinates
/// in the order of the three ranged parameters (by name).
pub fn bistable_points_3d(
    red: &ReducedSystem,
    spec: &GridSpec,
    workers: usize,
    cfg: &CounterConfig,
) -> Result<(Vec<Point3>, Vec<ScanRecord>), ScanError> {
    let axes: Vec<String> = spec.ranged().iter().map(|s| s.to_string()).collect();
    if axes.len() != 3 {
        return Err(ScanError::Grid(format!(
            "a 3D scan needs exactly three ranged parameters, got {}",
            axes.len()
        )));
    }
    let records = run_scan(red, spec, workers, cfg)?;
    let points = records
        .iter()
        .filter(|r| r.count == 3)
        .map(|r| {
            [
                r.point[&axes[0]].clone(),
                r.point[&axes[1]].clone(),
                r.point[&axes[2]].clone(),
            ]
        })
        .collect();
    Ok((points, records))
}
