use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::hull::{Hull, Point3};
use super::{record_stats, GridSpec, ScanError, ScanRecord};
use crate::algebra::{format_rat, parse_rat, rat_to_f64};

/// CSV with one row per record: parameter columns in `params` order, then
/// `count` and `elapsed_s`.
pub fn write_csv<W: Write>(
    records: &[ScanRecord],
    params: &[String],
    out: W,
) -> Result<(), ScanError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = params.iter().map(String::as_str).collect();
    header.extend(["count", "elapsed_s"]);
    w.write_record(&header)?;
    for r in records {
        let mut row: Vec<String> = params.iter().map(|p| format_rat(&r.point[p])).collect();
        row.push(r.count.to_string());
        row.push(format!("{:.6}", r.elapsed_s));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct StatsSummary {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FailureEntry {
    pub point: BTreeMap<String, String>,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScanSummary {
    pub model: String,
    pub grid: String,
    pub stats: Option<StatsSummary>,
    pub counts_histogram: BTreeMap<String, usize>,
    pub failures: Vec<FailureEntry>,
}

impl ScanSummary {
    pub fn new(model: &str, spec: &GridSpec, records: &[ScanRecord]) -> Self {
        let stats = record_stats(records).ok().map(|s| StatsSummary {
            mean: s.mean,
            median: s.median,
            stddev: s.stddev,
            max: s.max,
        });
        let mut counts_histogram = BTreeMap::new();
        for r in records {
            *counts_histogram.entry(r.count.to_string()).or_insert(0) += 1;
        }
        let failures = records
            .iter()
            .filter(|r| r.failed())
            .map(|r| FailureEntry {
                point: r.point.iter().map(|(k, v)| (k.clone(), format_rat(v))).collect(),
                error: r.error.clone().unwrap_or_default(),
            })
            .collect();
        ScanSummary {
            model: model.to_string(),
            grid: spec.to_string(),
            stats,
            counts_histogram,
            failures,
        }
    }

    pub fn to_json(&self) -> Result<String, ScanError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Writes `<stem>.dat` and `<stem>.gp` into `dir`. The data file holds the
/// ranged parameters and the count; the script draws one-solution and
/// three-solution points with different point types (2D for two ranged
/// parameters, 3D for three).
pub fn write_gnuplot(
    records: &[ScanRecord],
    spec: &GridSpec,
    dir: &Path,
    stem: &str,
) -> Result<(PathBuf, PathBuf), ScanError> {
    let axes = spec.ranged();
    if !(2..=3).contains(&axes.len()) {
        return Err(ScanError::Grid(format!(
            "plots need two or three ranged parameters, got {}",
            axes.len()
        )));
    }
    let data_path = dir.join(format!("{stem}.dat"));
    let script_path = dir.join(format!("{stem}.gp"));
    let mut data = format!("# {} count\n", axes.join(" "));
    for r in records {
        for a in &axes {
            data.push_str(&format!("{} ", rat_to_f64(&r.point[*a])));
        }
        data.push_str(&format!("{}\n", r.count));
    }
    fs::write(&data_path, data)?;

    let dat = format!("{stem}.dat");
    let c = axes.len() + 1;
    let (cmd, cols) = if axes.len() == 2 {
        ("plot", "1:2".to_string())
    } else {
        ("splot", "1:2:3".to_string())
    };
    let select = |n: i64| {
        let last = if axes.len() == 2 { 2 } else { 3 };
        cols.replace(&format!(":{last}"), &format!(":(${c}=={n}?${last}:1/0)"))
    };
    let mut script = String::new();
    script.push_str("set terminal pngcairo size 900,700\n");
    script.push_str(&format!("set output '{stem}.png'\n"));
    script.push_str(&format!("set xlabel '{}'\nset ylabel '{}'\n", axes[0], axes[1]));
    if axes.len() == 3 {
        script.push_str(&format!("set zlabel '{}'\n", axes[2]));
    }
    script.push_str(&format!(
        "{cmd} '{dat}' using {} with points pt 7 lc rgb 'goldenrod' title 'one steady state', \\\n     '{dat}' using {} with points pt 5 lc rgb 'blue' title 'three steady states', \\\n     '{dat}' using {} with points pt 2 lc rgb 'red' title 'failed'\n",
        select(1),
        select(3),
        select(-1)
    ));
    fs::write(&script_path, script)?;
    Ok((data_path, script_path))
}

/// OFF polyhedron: the hull's vertices followed by its triangles.
pub fn write_off<W: Write>(points: &[Point3], hull: &Hull, mut out: W) -> Result<(), ScanError> {
    let vertices = hull.vertices();
    let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} 0", vertices.len(), hull.faces.len())?;
    for &v in &vertices {
        let p = &points[v];
        writeln!(out, "{} {} {}", rat_to_f64(&p[0]), rat_to_f64(&p[1]), rat_to_f64(&p[2]))?;
    }
    for f in &hull.faces {
        writeln!(out, "3 {} {} {}", index[&f[0]], index[&f[1]], index[&f[2]])?;
    }
    Ok(())
}

/// Reads a scan CSV and returns the names of the three varying parameter
/// columns and the points whose count is 3.
pub fn read_bistable_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Point3>), ScanError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    let count_col = header
        .iter()
        .position(|h| h == "count")
        .ok_or_else(|| ScanError::Input("missing `count` column".into()))?;
    let names: Vec<String> = header.iter().take(count_col).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let values = (0..count_col)
            .map(|i| parse_rat(&rec[i]).map_err(|e| ScanError::Input(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let count: i64 = rec[count_col]
            .trim()
            .parse()
            .map_err(|_| ScanError::Input(format!("bad count `{}`", &rec[count_col])))?;
        rows.push((values, count));
    }
    let varying: Vec<usize> = (0..count_col)
        .filter(|&i| rows.iter().any(|(v, _)| v[i] != rows[0].0[i]))
        .collect();
    if varying.len() != 3 {
        return Err(ScanError::Input(format!(
            "expected three varying parameters, found {}",
            varying.len()
        )));
    }
    let axes = varying.iter().map(|&i| names[i].clone()).collect();
    let points = rows
        .into_iter()
        .filter(|(_, c)| *c == 3)
        .map(|(v, _)| [v[varying[0]].clone(), v[varying[1]].clone(), v[varying[2]].clone()])
        .collect();
    Ok((axes, points))
}
