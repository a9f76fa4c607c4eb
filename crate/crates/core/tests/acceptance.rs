//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use multistat::algebra::{rat, rat_to_f64, Rat};
use multistat::counter::{
    back_substitute, bivariate_at, oracle_solutions, validate_solution, CounterConfig, Locator,
};
use multistat::scan::{
    bistable_points_3d, convex_hull_3d, run_scan, stats, write_off, GridSpec, ScanRecord,
};
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

const BIOMOD26_GRIDS: [&str; 2] = [
    "k17=80:200:10,k18=50,k19=200:1000:50",
    "k17=100,k18=5:75:5,k19=200:1000:50",
];
const BIOMOD28_GRIDS: [&str; 2] = [
    "k28=40:160:10,k29=180,k30=100:1600:100",
    "k28=100,k29=120:240:10,k30=100:1600:100",
];
const GRID_3D: &str = "k17=80:800:40,k18=20:600:40,k19=200:1000:100";

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, n: usize, outcome: Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        self.lines.push((n, ok, detail));
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn golden_reduction(name: &str, cover: [&str; 2], anchor: &str, limit: Duration) -> Result<String, String> {
    let start = Instant::now();
    let p = pipeline(name);
    let elapsed = start.elapsed();
    if p.reduced.cover_vars != cover {
        return Err(format!("cover {:?}", p.reduced.cover_vars));
    }
    let golden = read_golden(name, &p.reduced.symbols());
    let raw = std::fs::read_to_string(format!(
        "{}/tests/data/{name}_reduced.txt",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    if !raw.contains(anchor) {
        return Err("golden data lacks the anchor term".into());
    }
    let ours: BTreeSet<String> = p.reduced.equations.iter().map(|e| e.canonical().to_string()).collect();
    let theirs: BTreeSet<String> = golden.iter().map(|e| e.to_string()).collect();
    if ours != theirs {
        return Err("reduced equations differ from the golden pair".into());
    }
    let mut a: Vec<Vec<String>> = p.reduced.equations.iter().map(|e| coefficient_multiset(&e.canonical())).collect();
    let mut b: Vec<Vec<String>> = golden.iter().map(coefficient_multiset).collect();
    a.sort();
    b.sort();
    if a != b {
        return Err("coefficient multisets differ".into());
    }
    if elapsed > limit {
        return Err(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Ok(format!("cover {{{}}}, 2 equations, {:.2} s", cover.join(", "), elapsed.as_secs_f64()))
}

fn conservation() -> Result<String, String> {
    let expected = [
        (
            "biomod26",
            vec![
                "x5 + x8 + x9 + x10 + x11 = k17",
                "x4 + x6 + x7 = k18",
                "x1 + x2 + x3 + x6 + x7 + x8 + x9 + x10 + x11 = k19",
            ],
        ),
        (
            "biomod28",
            vec![
                "x6 + x11 + x12 + x13 + x14 + x15 + x16 = k28",
                "x5 + x7 + x8 + x9 + x10 = k29",
                "x1 + x2 + x3 + x4 + x7 + x8 + x9 + x10 + x11 + x12 + x13 + x14 + x15 + x16 = k30",
            ],
        ),
    ];
    for (name, want) in expected {
        let p = pipeline(name);
        let got: Vec<String> = p.laws.iter().map(|l| l.display(&p.model.species)).collect();
        if got != want {
            return Err(format!("{name}: {got:?}"));
        }
        for law in &p.laws {
            let mut sum = p.model.odes[0].scale(&Rat::zero());
            for (c, ode) in law.coeffs.iter().zip(&p.model.odes) {
                sum = sum.checked_add(&ode.scale(&Rat::from_integer(c.clone()))).unwrap();
            }
            if !sum.is_zero() {
                return Err(format!("{name}: {} is not conserved", law.total));
            }
        }
    }
    Ok("6 laws reproduced, all combinations vanish".into())
}

/// Number of oracle solutions whose eliminated species are all positive.
fn oracle_count(p: &Pipeline, r: &ScanRecord, cfg: &CounterConfig) -> Result<usize, String> {
    let inst = bivariate_at(&p.reduced, &r.point).map_err(|e| e.to_string())?;
    let boxes = oracle_solutions(&inst, cfg.max_depth).map_err(|e| e.to_string())?;
    let mut n = 0;
    for bx in boxes {
        let mut loc = Locator::Krawczyk { inst: inst.clone(), bx };
        if back_substitute(&p.reduced, &r.point, &mut loc, &cfg.width)
            .map_err(|e| e.to_string())?
            .is_some()
        {
            n += 1;
        }
    }
    Ok(n)
}

struct GridOutcome {
    classification: Result<String, String>,
    worst_residual: Option<Rat>,
    failures: Vec<String>,
    solutions: usize,
}

fn grid_classification(name: &str, grids: &[&str], expected_points: usize, limit: Duration) -> GridOutcome {
    let p = pipeline(name);
    let cfg = CounterConfig::default();
    let mut records = Vec::new();
    let mut scan_time = Duration::ZERO;
    for g in grids {
        let spec: GridSpec = g.parse().unwrap();
        let start = Instant::now();
        records.extend(run_scan(&p.reduced, &spec, workers(), &cfg).unwrap());
        scan_time += start.elapsed();
    }

    let mut problems = Vec::new();
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.count).or_default() += 1;
    }
    if records.len() != expected_points {
        problems.push(format!("{} points, expected {expected_points}", records.len()));
    }
    if histogram.keys().any(|c| *c != 1 && *c != 3) {
        problems.push(format!("counts outside {{1, 3}}: {histogram:?}"));
    }
    if !histogram.contains_key(&1) || !histogram.contains_key(&3) {
        problems.push(format!("only one class present: {histogram:?}"));
    }
    let mut mismatches = 0;
    for r in records.iter().filter(|r| !r.failed()) {
        match oracle_count(&p, r, &cfg) {
            Ok(n) if n as i64 == r.count => {}
            Ok(_) => mismatches += 1,
            Err(e) => problems.push(format!("oracle failed: {e}")),
        }
    }
    if mismatches > 0 {
        problems.push(format!("oracle disagrees at {mismatches} points"));
    }
    if scan_time > limit {
        problems.push(format!("scan took {:.1} s", scan_time.as_secs_f64()));
    }
    let classification = if problems.is_empty() {
        Ok(format!(
            "{} points, counts {:?}, oracle agrees everywhere, scan {:.1} s",
            records.len(),
            histogram,
            scan_time.as_secs_f64()
        ))
    } else {
        Err(problems.join("; "))
    };

    let tol = CounterConfig::default().residual_tol;
    let mut worst_residual = None::<Rat>;
    let mut failures = Vec::new();
    let mut solutions = 0;
    for r in &records {
        if let Some(e) = &r.error {
            failures.push(format!("{name} count failed: {e}"));
        }
        for s in &r.solutions {
            solutions += 1;
            let report = validate_solution(&p.model, &p.laws, &s.midpoint(), &tol).unwrap();
            if worst_residual.as_ref().is_none_or(|w| &report.max_residual > w) {
                worst_residual = Some(report.max_residual.clone());
            }
            if !report.passed {
                failures.push(format!(
                    "{name}: residual {:e}, all positive {}",
                    rat_to_f64(&report.max_residual),
                    report.all_positive
                ));
            }
        }
    }
    GridOutcome {
        classification,
        worst_residual,
        failures,
        solutions,
    }
}

fn certification(outcomes: &[&GridOutcome]) -> Result<String, String> {
    let failures: Vec<&String> = outcomes.iter().flat_map(|o| &o.failures).collect();
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first: {first}", failures.len()));
    }
    let solutions: usize = outcomes.iter().map(|o| o.solutions).sum();
    let worst = outcomes
        .iter()
        .filter_map(|o| o.worst_residual.as_ref())
        .max()
        .map_or(0.0, rat_to_f64);
    Ok(format!("{solutions} solutions validated, worst residual {worst:e}"))
}

fn property_suites() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(20240601);
    for _ in 0..1000 {
        let n = rng.gen_range(1..7);
        let roots: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(-40..=40), rng.gen_range(1..=7))).collect();
        let q = rng.gen_range(0..4);
        check_isolation(&roots, q).map_err(|e| format!("isolation {roots:?}, {q}: {e}"))?;
    }
    for _ in 0..50 {
        let mut poly = |deg: usize| {
            let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
            if c[deg] == 0 {
                c[deg] = 1;
            }
            c
        };
        let (a, b) = (poly(6), poly(5));
        check_resultant(&a, &b).map_err(|e| format!("resultant {a:?}, {b:?}: {e}"))?;
    }
    for _ in 0..300 {
        let n = rng.gen_range(1..=16);
        let edges: Vec<(usize, usize)> = (0..rng.gen_range(0..30)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let nonlinear: Vec<usize> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..n)).collect();
        check_cover(&graph_from(n, &edges, &nonlinear)).map_err(|e| format!("cover: {e}"))?;
    }
    for name in ["biomod26", "biomod28"] {
        check_cover(&pipeline(name).graph).map_err(|e| format!("{name} cover: {e}"))?;
    }
    for _ in 0..100 {
        let pts: Vec<(i64, i64, i64)> = (0..rng.gen_range(0..60))
            .map(|_| (rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6)))
            .collect();
        check_hull(&pts).map_err(|e| format!("hull: {e}"))?;
    }
    // Timing statistics on synthetic durations.
    let times = [0.5, 0.1, 0.4, 0.2, 0.3, 1.5];
    let s = stats(&times).map_err(|e| e.to_string())?;
    let mean = 0.5;
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / 6.0;
    if (s.mean - mean).abs() > 1e-12 || s.median != 0.3 || (s.stddev - var.sqrt()).abs() > 1e-12 || s.max != 1.5 {
        return Err(format!("statistics {s:?}"));
    }
    Ok("1000 isolation, 50 resultant, 302 cover, 100 hull cases and timing statistics".into())
}

fn scan_3d(limit: Duration) -> Result<String, String> {
    let p = pipeline("biomod26");
    let spec: GridSpec = GRID_3D.parse().unwrap();
    let start = Instant::now();
    let (points, records) =
        bistable_points_3d(&p.reduced, &spec, workers(), &CounterConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(r) = records.iter().find(|r| r.failed()) {
        return Err(format!("count failed at {:?}: {:?}", r.point, r.error));
    }
    if points.is_empty() {
        return Err("no bistable points".into());
    }
    let axis_range = |k: usize| {
        let lo = points.iter().map(|q| q[k].clone()).min().unwrap();
        let hi = points.iter().map(|q| q[k].clone()).max().unwrap();
        (lo, hi)
    };
    let (k17_lo, k17_hi) = axis_range(0);
    let (k18_lo, k18_hi) = axis_range(1);
    let inside = k17_lo > rat(80, 1) && k17_hi < rat(800, 1) && k18_lo > rat(20, 1) && k18_hi < rat(580, 1);
    if !inside {
        return Err(format!("extremes k17 [{k17_lo}, {k17_hi}], k18 [{k18_lo}, {k18_hi}] touch the box"));
    }

    let raw: Vec<(i64, i64, i64)> = points
        .iter()
        .map(|q| {
            let c = |x: &Rat| x.to_integer().to_i64().unwrap();
            (c(&q[0]), c(&q[1]), c(&q[2]))
        })
        .collect();
    check_hull(&raw)?;
    let hull = convex_hull_3d(&points);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bistable.off");
    write_off(&points, &hull, std::fs::File::create(&path).unwrap()).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    if lines.next() != Some("OFF") {
        return Err("OFF header missing".into());
    }
    let counts: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    let (nv, nf) = (counts[0], counts[1]);
    let body: Vec<&str> = lines.collect();
    if body.len() != nv + nf || nf != 2 * nv - 4 {
        return Err(format!("OFF has {nv} vertices, {nf} faces, {} lines", body.len()));
    }
    for face in &body[nv..] {
        let idx: Vec<usize> = face.split_whitespace().map(|t| t.parse().unwrap()).collect();
        if idx[0] != 3 || idx[1..].iter().any(|&i| i >= nv) {
            return Err(format!("bad face `{face}`"));
        }
    }
    if elapsed > limit {
        return Err(format!("took {:.1} s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{} of {} points bistable, k17 in [{k17_lo}, {k17_hi}], k18 in [{k18_lo}, {k18_hi}], hull {nv} vertices {nf} faces, {:.1} s",
        points.len(),
        records.len(),
        elapsed.as_secs_f64()
    ))
}

#[test]
fn acceptance() {
    let mut report = Report { lines: Vec::new() };
    report.record(
        1,
        golden_reduction("biomod26", ["x4", "x5"], "1062444*k18*x4^2*x5 + 23478000*k18*x4^2", Duration::from_secs(10)),
    );
    report.record(
        2,
        golden_reduction("biomod28", ["x5", "x6"], "3796549898085*k29*x5^3*x6", Duration::from_secs(30)),
    );
    report.record(3, conservation());
    let g26 = grid_classification("biomod26", &BIOMOD26_GRIDS, 476, Duration::from_secs(300));
    report.record(4, g26.classification.clone());
    let g28 = grid_classification("biomod28", &BIOMOD28_GRIDS, 416, Duration::from_secs(1800));
    report.record(5, g28.classification.clone());
    report.record(6, certification(&[&g26, &g28]));
    report.record(7, property_suites());
    report.record(8, scan_3d(Duration::from_secs(1800)));

    let failed: Vec<usize> = report.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
