//! Command-line front end.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::algebra::{format_rat, parse_rat, rat_int, MultiPoly, Rat};
use crate::counter::{
    bivariate_at, count_positive, oracle_solutions, validate_solution, CounterConfig,
};
use crate::model::{
    conservation_laws, embedded_model, parse_model, steady_state_system, OdeModel,
    EMBEDDED_MODELS,
};
use crate::reduction::{build_dependency_graph, minimum_vertex_cover, reduce, DependencyGraph};
use crate::scan::{
    convex_hull_3d, read_bistable_csv, run_scan, write_csv, write_gnuplot, write_off, GridSpec,
    ScanSummary,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "multistat", version, about = "Exact multistationarity analysis of reaction-network models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
    Gnuplot,
}

#[derive(Debug, clap::Args)]
pub struct ModelArg {
    /// Embedded model name (biomod26, biomod28) or path to a model file.
    #[arg(long)]
    pub model: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the conservation laws.
    Conservation(ModelArg),
    /// Print the dependency graph and a minimum vertex cover.
    Graph(ModelArg),
    /// Print the reduced system as JSON.
    Reduce {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Count positive steady states over a parameter grid.
    Scan {
        #[command(flatten)]
        model: ModelArg,
        /// Grid such as `k17=80:200:10,k18=50,k19=200:1000:50`.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Residual tolerance for certified solutions.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Convex hull of the three-solution points of a scan CSV, as OFF.
    Hull {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the invariant checks on the embedded models.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<String>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn certification(message: impl ToString) -> Self {
        Failure {
            code: EXIT_CERTIFICATION,
            message: message.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_model(spec: &str) -> Result<OdeModel, Failure> {
    if EMBEDDED_MODELS.contains(&spec) {
        return embedded_model(spec).map_err(Failure::input);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Failure::input(format!("cannot read model `{spec}`: {e}")))?;
    parse_model(&text).map_err(|e| Failure::input(format!("{spec}: {e}")))
}

fn config(tol: &Option<String>) -> Result<CounterConfig, Failure> {
    let mut cfg = CounterConfig::default();
    if let Some(t) = tol {
        cfg.residual_tol = parse_rat(t).map_err(Failure::usage)?;
    }
    Ok(cfg)
}

fn output_path(dir: &Path, name: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    Ok(dir.join(name))
}

fn io<E: std::fmt::Display>(e: E) -> Failure {
    Failure::input(e)
}

fn cover_names(g: &DependencyGraph, cover: &BTreeSet<usize>) -> Vec<String> {
    cover.iter().map(|&i| g.vertices[i].clone()).collect()
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Conservation(m) => {
            let model = load_model(&m.model)?;
            for law in conservation_laws(&model).map_err(Failure::input)? {
                writeln!(out, "{}", law.display(&model.species)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Graph(m) => {
            let model = load_model(&m.model)?;
            let sys = steady_state_system(&model).map_err(Failure::input)?;
            let g = build_dependency_graph(&sys);
            let cover = minimum_vertex_cover(&g);
            writeln!(out, "{g}").map_err(io)?;
            writeln!(out, "cover: {}", cover_names(&g, &cover).join(" ")).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { model, output_dir } => {
            let m = load_model(&model.model)?;
            let sys = steady_state_system(&m).map_err(Failure::input)?;
            let (_, red) = reduce(&sys).map_err(Failure::input)?;
            let doc = json!({
                "model": m.name,
                "cover": red.cover_vars,
                "parameters": red.parameters,
                "eliminationOrder": red.elimination_order(),
                "equations": red.equations.iter().map(MultiPoly::to_string).collect::<Vec<_>>(),
                "steps": red.steps.iter().map(|s| json!({
                    "var": s.var,
                    "equation": s.equation_index,
                    "sign": s.sign.to_string(),
                    "c": s.c.to_string(),
                    "d": s.d.to_string(),
                })).collect::<Vec<_>>(),
            });
            let text = serde_json::to_string_pretty(&doc).map_err(io)?;
            match output_dir {
                Some(dir) => {
                    let path = output_path(&dir, &format!("{}_reduced.json", m.name))?;
                    fs::write(&path, text + "\n").map_err(io)?;
                    writeln!(err, "wrote {}", path.display()).map_err(io)?;
                }
                None => writeln!(out, "{text}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Scan {
            model,
            grid,
            out: format,
            output_dir,
            workers,
            tol,
        } => {
            let spec: GridSpec = grid.parse().map_err(Failure::usage)?;
            let m = load_model(&model.model)?;
            let cfg = config(&tol)?;
            let sys = steady_state_system(&m).map_err(Failure::input)?;
            let (_, red) = reduce(&sys).map_err(Failure::input)?;
            spec.enumerate(&red.parameters).map_err(Failure::usage)?;
            let workers = workers.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            let records = run_scan(&red, &spec, workers, &cfg).map_err(Failure::input)?;
            let summary = ScanSummary::new(&m.name, &spec, &records);
            match format {
                OutFormat::Csv => match &output_dir {
                    Some(dir) => {
                        let path = output_path(dir, &format!("{}_scan.csv", m.name))?;
                        let file = fs::File::create(&path).map_err(io)?;
                        write_csv(&records, &red.parameters, file).map_err(io)?;
                        writeln!(err, "wrote {}", path.display()).map_err(io)?;
                    }
                    None => write_csv(&records, &red.parameters, &mut *out).map_err(io)?,
                },
                OutFormat::Json => {
                    let text = summary.to_json().map_err(io)?;
                    match &output_dir {
                        Some(dir) => {
                            let path = output_path(dir, &format!("{}_summary.json", m.name))?;
                            fs::write(&path, text + "\n").map_err(io)?;
                            writeln!(err, "wrote {}", path.display()).map_err(io)?;
                        }
                        None => writeln!(out, "{text}").map_err(io)?,
                    }
                }
                OutFormat::Gnuplot => {
                    let dir = output_dir.unwrap_or_else(|| PathBuf::from("."));
                    fs::create_dir_all(&dir).map_err(io)?;
                    let (dat, gp) = write_gnuplot(&records, &spec, &dir, &format!("{}_scan", m.name))
                        .map_err(Failure::usage)?;
                    writeln!(err, "wrote {} and {}", dat.display(), gp.display()).map_err(io)?;
                }
            }
            if summary.failures.is_empty() {
                Ok(EXIT_OK)
            } else {
                for f in &summary.failures {
                    writeln!(err, "failed at {:?}: {}", f.point, f.error).map_err(io)?;
                }
                Err(Failure::certification(format!(
                    "{} of {} grid points could not be certified",
                    summary.failures.len(),
                    records.len()
                )))
            }
        }
        Command::Hull { input, output_dir } => {
            let file = fs::File::open(&input)
                .map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
            let (axes, points) = read_bistable_csv(file).map_err(Failure::input)?;
            let hull = convex_hull_3d(&points);
            if let Some(d) = hull.degenerate {
                writeln!(err, "degenerate hull ({d:?}) over {} points", points.len()).map_err(io)?;
            }
            writeln!(err, "axes: {}", axes.join(" ")).map_err(io)?;
            match output_dir {
                Some(dir) => {
                    let path = output_path(&dir, "hull.off")?;
                    let file = fs::File::create(&path).map_err(io)?;
                    write_off(&points, &hull, file).map_err(io)?;
                    writeln!(err, "wrote {}", path.display()).map_err(io)?;
                }
                None => write_off(&points, &hull, &mut *out).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Check { seed, tol } => {
            let cfg = config(&tol)?;
            let mut all_ok = true;
            for name in EMBEDDED_MODELS {
                for (label, result) in check_model(name, seed, &cfg) {
                    let ok = result.is_ok();
                    all_ok &= ok;
                    match result {
                        Ok(()) => writeln!(out, "ok   {name}: {label}"),
                        Err(why) => writeln!(out, "FAIL {name}: {label}: {why}"),
                    }
                    .map_err(io)?;
                }
            }
            if all_ok {
                Ok(EXIT_OK)
            } else {
                Err(Failure::certification("some checks failed"))
            }
        }
    }
}

type Check = (&'static str, Result<(), String>);

/// Smallest cover size found by trying every vertex subset.
fn brute_force_cover_size(g: &DependencyGraph) -> usize {
    let n = g.len();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| g.is_cover(s))
        .map(|s| s.len())
        .min()
        .unwrap_or(0)
}

fn check_model(name: &str, seed: u64, cfg: &CounterConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    let model = match embedded_model(name) {
        Ok(m) => m,
        Err(e) => return vec![("model parses", Err(e.to_string()))],
    };
    let laws = match conservation_laws(&model) {
        Ok(l) => l,
        Err(e) => return vec![("conservation laws", Err(e.to_string()))],
    };
    let odes = model.numeric_odes();
    let combination = laws.iter().try_for_each(|law| {
        let mut acc = MultiPoly::zero(odes[0].vars());
        for (c, ode) in law.coeffs.iter().zip(&odes) {
            acc = acc.checked_add(&ode.scale(&Rat::from_integer(c.clone()))).map_err(|e| e.to_string())?;
        }
        if acc.is_zero() {
            Ok(())
        } else {
            Err(format!("{} is not conserved", law.display(&model.species)))
        }
    });
    checks.push(("conservation laws annihilate the ODEs", combination));

    let sys = match steady_state_system(&model) {
        Ok(s) => s,
        Err(e) => {
            checks.push(("steady-state system", Err(e.to_string())));
            return checks;
        }
    };
    let graph = build_dependency_graph(&sys);
    let cover = minimum_vertex_cover(&graph);
    let minimal = if !graph.is_cover(&cover) {
        Err("not a vertex cover".to_string())
    } else if brute_force_cover_size(&graph) != cover.len() {
        Err("cover is not minimum".to_string())
    } else {
        Ok(())
    };
    checks.push(("vertex cover is minimum", minimal));

    let red = match reduce(&sys) {
        Ok((_, red)) => red,
        Err(e) => {
            checks.push(("reduction", Err(e.to_string())));
            return checks;
        }
    };
    let steps_ok = red.steps.iter().try_for_each(|s| {
        let idx = red.system_symbols.iter().position(|v| v == &s.var).expect("known symbol");
        if !s.sign.is_definite() || s.c.contains_var(idx) || s.d.contains_var(idx) {
            Err(format!("step for {} is malformed", s.var))
        } else {
            Ok(())
        }
    });
    checks.push(("elimination steps are sign-definite and solved", steps_ok));
    let names = cover_names(&graph, &cover);
    checks.push((
        "reduced system lives on the cover",
        if names == red.cover_vars && red.equations.len() == 2 {
            Ok(())
        } else {
            Err(format!("cover {names:?}, reduced variables {:?}", red.cover_vars))
        },
    ));

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let point: BTreeMap<String, Rat> = red
        .parameters
        .iter()
        .map(|p| (p.clone(), rat_int(rng.gen_range(20..=1000))))
        .collect();
    let described: Vec<String> = point.iter().map(|(k, v)| format!("{k}={}", format_rat(v))).collect();
    let counted = (|| -> Result<(), String> {
        let res = count_positive(&red, &point, cfg).map_err(|e| e.to_string())?;
        let inst = bivariate_at(&red, &point).map_err(|e| e.to_string())?;
        let oracle = oracle_solutions(&inst, cfg.max_depth).map_err(|e| e.to_string())?;
        if oracle.len() != res.uv_candidates {
            return Err(format!(
                "at {}: {} reduced solutions, oracle {}",
                described.join(","),
                res.uv_candidates,
                oracle.len()
            ));
        }
        for sol in &res.solutions {
            let report = validate_solution(&model, &laws, &sol.midpoint(), &cfg.residual_tol)
                .map_err(|e| e.to_string())?;
            if !report.passed {
                return Err(format!("solution at {} fails validation", described.join(",")));
            }
        }
        Ok(())
    })();
    checks.push(("count agrees with subdivision and validates", counted));
    checks
}
