//! Command-line front end: file loading, the subcommands, and output writers.

pub mod bench;
pub mod reproduce;
pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use innerset::capability::{run_query, sweep, sweep_csv, SweepCell};
use innerset::geometry::{InnerApprox, Shape};
use innerset::parse;
use innerset::robot::Robot;
use innerset::solution_sets::{solve_report, verify, SolveReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Input {
        context: String,
        source: innerset::Error,
    },
    #[error(transparent)]
    Lib(#[from] innerset::Error),
}

/// Exit status for a run that produced output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified,
    /// Empty set, no certificate, or a failed reproduction check.
    Uncertified,
}

impl Outcome {
    pub fn code(self) -> ExitCode {
        match self {
            Outcome::Certified => ExitCode::SUCCESS,
            Outcome::Uncertified => ExitCode::from(2),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "innerset",
    version,
    about = "Certified inner approximations of interval linear solution sets"
)]
pub struct Cli {
    /// Worker threads for sweeps and benchmarks.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Seed of the random benchmark systems.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// `solve`: step of the fixed-center cube refinement when the problem sets none.
    /// `reproduce`: relative tolerance replacing every reference tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inner approximation of one interval linear problem.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// One robot capability query.
    Capability {
        #[arg(long)]
        input: PathBuf,
        /// Robot description; the built-in three-link arm otherwise.
        #[arg(long)]
        robot: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Capability radius over a box of configurations.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        robot: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Timings of every class and shape on a random system.
    Bench {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Regenerates the worked examples and checks them against reference values.
    Reproduce {
        /// fig2 … fig8, table3, or all.
        id: String,
        /// Directory for plots and data files.
        #[arg(long, default_value = "reproduce_out")]
        output: PathBuf,
        #[arg(long)]
        robot: Option<PathBuf>,
        /// Box width of the configuration-space maps.
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
        #[arg(long, default_value_t = 20)]
        runs: usize,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn input<T>(path: &Path, f: fn(&[u8]) -> innerset::Result<T>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Input {
        context: path.display().to_string(),
        source,
    })
}

fn write_out(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn load_robot(path: Option<&Path>) -> Result<Robot, CliError> {
    path.map_or_else(|| Ok(Robot::preset()), |p| input(p, parse::parse_robot))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("result types serialize") + "\n"
}

/// Points describing a shape: polytope vertices, cube corners, or a
/// latitude/longitude sampling of a ball (a circle in 2-D).
pub fn point_cloud(a: &InnerApprox) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(match &a.shape {
        Shape::Polytope { vrep: Some(v), .. } => v.vertices().to_vec(),
        Shape::Polytope { hrep, .. } => hrep.vertices()?,
        Shape::Cube { center, r } => {
            let m = center.len();
            (0..1usize << m)
                .map(|k| {
                    (0..m)
                        .map(|i| center[i] + if k >> i & 1 == 1 { *r } else { -*r })
                        .collect()
                })
                .collect()
        }
        Shape::Ball { center, r } => match center.len() {
            2 => (0..64)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / 64.0;
                    vec![center[0] + r * t.cos(), center[1] + r * t.sin()]
                })
                .collect(),
            3 => {
                let mut pts = Vec::new();
                for i in 0..=12 {
                    let phi = std::f64::consts::PI * i as f64 / 12.0;
                    let ring = if i == 0 || i == 12 { 1 } else { 24 };
                    for k in 0..ring {
                        let t = std::f64::consts::TAU * k as f64 / ring as f64;
                        pts.push(vec![
                            center[0] + r * phi.sin() * t.cos(),
                            center[1] + r * phi.sin() * t.sin(),
                            center[2] + r * phi.cos(),
                        ]);
                    }
                }
                pts
            }
            m => return Err(CliError::Usage(format!("no point cloud for a {m}-D ball"))),
        },
    })
}

pub fn cloud_csv(pts: &[Vec<f64>]) -> String {
    let dim = pts.first().map_or(0, Vec::len);
    let mut s = (1..=dim)
        .map(|i| format!("y{i}"))
        .collect::<Vec<_>>()
        .join(",")
        + "\n";
    for p in pts {
        let row: Vec<String> = p.iter().map(f64::to_string).collect();
        let _ = writeln!(s, "{}", row.join(","));
    }
    s
}

fn shape_output(report: &SolveReport, format: Format, title: &str) -> Result<String, CliError> {
    let Some(a) = report.to_approx() else {
        return match format {
            Format::Csv => Ok(String::new()),
            _ => Err(CliError::Usage(
                "nothing to plot: the result is not certified".into(),
            )),
        };
    };
    match format {
        Format::Csv => Ok(cloud_csv(&point_cloud(&a)?)),
        Format::Svg => {
            let layers = svg::approx_layers(&a, "purple", false).ok_or_else(|| {
                CliError::Usage("svg output needs a 2-D result; use --format csv".into())
            })?;
            Ok(svg::render(title, "y1", "y2", &layers))
        }
        Format::Json => unreachable!("handled by the caller"),
    }
}

fn outcome(certified: bool) -> Outcome {
    if certified {
        Outcome::Certified
    } else {
        Outcome::Uncertified
    }
}

fn sweep_output(cells: &[SweepCell], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(sweep_csv(cells)),
        Format::Json => Ok(to_json(&cells)),
        Format::Svg => {
            let free: Vec<usize> = match cells.first() {
                Some(c) => (0..c.q.dim())
                    .filter(|&i| cells.iter().any(|d| d.q[i] != c.q[i]))
                    .collect(),
                None => Vec::new(),
            };
            let &[i, j] = free.as_slice() else {
                return Err(CliError::Usage(
                    "svg output needs exactly two swept joints".into(),
                ));
            };
            Ok(svg::sweep_heat_map(cells, i, j, "capability radius"))
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Solve {
            input: path,
            output,
            format,
        } => {
            let mut p = input(&path, parse::parse_problem)?;
            if let (Some(t), None) = (cli.tolerance, p.eps) {
                p.eps = Some(t);
            }
            let report = solve_report(&p)?;
            if let Some(a) = report.to_approx() {
                // The returned shape is re-checked by the membership tests before it is written.
                if !verify(&p, &a)? {
                    return Err(CliError::Usage(
                        "internal error: returned shape failed its membership check".into(),
                    ));
                }
            }
            let text = match format {
                Format::Json => to_json(&report),
                f => shape_output(
                    &report,
                    f,
                    &format!("{} {}", report.class.name(), report.shape),
                )?,
            };
            write_out(output.as_deref(), &text)?;
            Ok(outcome(report.certified))
        }
        Command::Capability {
            input: path,
            robot,
            output,
            format,
        } => {
            let robot = load_robot(robot.as_deref())?;
            let q = input(&path, parse::parse_capability_query)?;
            let report = run_query(&robot, &q)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = match format {
                Format::Json => to_json(&report),
                f => shape_output(&report.result, f, &format!("{:?} capability", report.kind))?,
            };
            write_out(output.as_deref(), &text)?;
            Ok(outcome(report.result.certified))
        }
        Command::Sweep {
            input: path,
            robot,
            output,
            format,
        } => {
            let robot = load_robot(robot.as_deref())?;
            let spec = input(&path, parse::parse_sweep_spec)?;
            let cells = sweep(&robot, &spec)?;
            write_out(output.as_deref(), &sweep_output(&cells, format)?)?;
            Ok(Outcome::Certified)
        }
        Command::Bench {
            n,
            m,
            runs,
            output,
            format,
        } => {
            let rows = bench::run(&bench::BenchSpec {
                n,
                m,
                runs,
                seed: cli.seed,
            })?;
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "{} {}: {}",
                    r.class.name(),
                    r.op,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            let text = match format {
                Format::Csv => bench::to_csv(&rows),
                Format::Json => {
                    let v: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "op": r.op, "class": r.class.name(), "mean_ms": r.mean_ms,
                                "std_ms": r.std_ms, "reference_ms": r.reference_ms, "error": r.error,
                            })
                        })
                        .collect();
                    to_json(&v)
                }
                Format::Svg => return Err(CliError::Usage("bench writes csv or json".into())),
            };
            write_out(output.as_deref(), &text)?;
            Ok(Outcome::Certified)
        }
        Command::Reproduce {
            id,
            output,
            robot,
            resolution,
            runs,
        } => {
            let robot = load_robot(robot.as_deref())?;
            let opts = reproduce::Options {
                tolerance: cli.tolerance,
                sweep_resolution: resolution,
                bench_runs: runs,
                seed: cli.seed,
            };
            let ids: Vec<&str> = if id == "all" {
                reproduce::IDS.to_vec()
            } else {
                vec![id.as_str()]
            };
            std::fs::create_dir_all(&output).map_err(|source| CliError::Io {
                path: output.clone(),
                source,
            })?;
            let mut figs = Vec::new();
            for id in ids {
                let fig = reproduce::reproduce(id, &robot, &opts)?;
                for a in &fig.artifacts {
                    let p = output.join(&a.name);
                    std::fs::write(&p, &a.contents)
                        .map_err(|source| CliError::Io { path: p, source })?;
                }
                figs.push(fig);
            }
            print!("{}", reproduce::table(&figs));
            Ok(outcome(
                figs.iter()
                    .flat_map(|f| &f.checks)
                    .all(reproduce::Check::pass),
            ))
        }
    }
}
