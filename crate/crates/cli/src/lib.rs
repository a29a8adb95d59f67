//! Command-line front end: optimize, verify, exact solve, lower bounds.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use turbowcol::bounds::{degeneracy_bound, MmdAction, MmdPlus};
use turbowcol::oracle::exact_wcol;
use turbowcol::order::{format_ordering, parse_ordering};
use turbowcol::{evaluate_full_ordering, optimize, Graph, Heuristic, RunConfig, RunResult, Turbo};

#[derive(Debug, Parser)]
#[command(
    name = "turbowcol",
    version,
    about = "Vertex orderings with small weak r-coloring number"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an ordering with a turbocharged heuristic.
    Optimize(OptimizeArgs),
    /// Evaluate an ordering file against a graph.
    Verify {
        graph: PathBuf,
        ordering: PathBuf,
        #[arg(short, long)]
        radius: usize,
    },
    /// Exact weak r-coloring number of a tiny graph.
    Oracle {
        graph: PathBuf,
        #[arg(short, long)]
        radius: usize,
        /// Refuse graphs with more vertices than this.
        #[arg(long, default_value_t = 9)]
        limit: usize,
    },
    /// Lower bound on the weak r-coloring number.
    LowerBound {
        graph: PathBuf,
        #[arg(short, long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = BoundMethod::MmdPlus)]
        method: BoundMethod,
        /// Print every contraction or deletion step.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug, clap::Args)]
pub struct OptimizeArgs {
    pub graph: PathBuf,
    #[arg(short, long)]
    pub radius: usize,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Wreach)]
    pub heuristic: HeuristicArg,
    #[arg(long, value_enum, default_value_t = TurboArg::Ic)]
    pub turbo: TurboArg,
    /// Seconds of optimisation after the baseline ordering.
    #[arg(long, default_value_t = 300.0)]
    pub timeout: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub merge_attempts: usize,
    #[arg(long)]
    pub order_out: Option<PathBuf>,
    #[arg(long)]
    pub stats_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    DegreeLr,
    Wreach,
    Sreach,
    DegreeRl,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::DegreeLr => Heuristic::DegreeLr,
            HeuristicArg::Wreach => Heuristic::WreachLr,
            HeuristicArg::Sreach => Heuristic::SreachRl,
            HeuristicArg::DegreeRl => Heuristic::DegreeRl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TurboArg {
    None,
    Ic,
    Merge,
    IcRl,
}

impl From<TurboArg> for Turbo {
    fn from(t: TurboArg) -> Self {
        match t {
            TurboArg::None => Turbo::None,
            TurboArg::Ic => Turbo::Ic,
            TurboArg::Merge => Turbo::Merge,
            TurboArg::IcRl => Turbo::IcRl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundMethod {
    Degeneracy,
    #[value(name = "mmd+")]
    MmdPlus,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: turbowcol::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] turbowcol::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 3 for an incompatible heuristic and turbocharger,
    /// 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(turbowcol::Error::Incompatible { .. }) => 3,
            CliError::Read { .. } | CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Core(
                turbowcol::Error::InvalidParameter(_) | turbowcol::Error::TooLarge { .. },
            ) => 2,
            _ => 1,
        }
    }
}

/// Per-run statistics record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub heuristic: String,
    pub turbo: String,
    pub seed: u64,
    pub final_k: usize,
    pub baseline_k: usize,
    pub lower_bound: usize,
    pub cnt_tc: u64,
    pub nodes_total: u64,
    pub time_in_tc_ms: f64,
    pub total_ms: f64,
    pub proven_optimal: bool,
    pub invocations: Vec<InvocationRecord>,
    pub timeline: Vec<TimelineRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvocationRecord {
    pub c: usize,
    pub nodes: u64,
    pub depth: usize,
    pub depth_over_c: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineRecord {
    pub elapsed_ms: f64,
    pub k: usize,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl StatsRecord {
    pub fn new(instance: &str, g: &Graph, cfg: &RunConfig, res: &RunResult) -> Self {
        let stats = &res.stats;
        StatsRecord {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            r: cfg.r,
            heuristic: cfg.heuristic.name().to_string(),
            turbo: cfg.turbo.name().to_string(),
            seed: cfg.seed,
            final_k: res.k,
            baseline_k: res.baseline_k,
            lower_bound: res.lower_bound,
            cnt_tc: stats.cnt_tc,
            nodes_total: stats.nodes,
            time_in_tc_ms: ms(stats.time_in_tc),
            total_ms: ms(res.total),
            proven_optimal: stats.proven_optimal,
            invocations: stats
                .invocations
                .iter()
                .map(|i| InvocationRecord {
                    c: i.c,
                    nodes: i.nodes,
                    depth: i.depth,
                    depth_over_c: i.depth_over_c(),
                    success: i.success,
                })
                .collect(),
            timeline: stats
                .timeline
                .iter()
                .map(|t| TimelineRecord {
                    elapsed_ms: ms(t.elapsed),
                    k: t.k,
                })
                .collect(),
        }
    }
}

/// Writes `record` as a single JSON object followed by a newline.
pub fn emit_stats<W: Write>(record: &StatsRecord, mut sink: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut sink, record)?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Graph::parse(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

/// Executes a parsed command line, writing human-readable output to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    match cli.command {
        Command::Optimize(args) => run_optimize(args, out),
        Command::Verify {
            graph,
            ordering,
            radius,
        } => {
            let g = read_graph(&graph)?;
            let text = fs::read_to_string(&ordering).map_err(|source| CliError::Read {
                path: ordering.clone(),
                source,
            })?;
            let order = parse_ordering(&g, &text).map_err(|source| CliError::Input {
                path: ordering.clone(),
                source,
            })?;
            let eval = evaluate_full_ordering(&g, radius, &order)?;
            writeln!(out, "wcol {}", eval.wcol)?;
            if let Some(w) = eval.witness {
                writeln!(out, "witness {}", g.label(w))?;
            }
            Ok(())
        }
        Command::Oracle {
            graph,
            radius,
            limit,
        } => {
            let g = read_graph(&graph)?;
            let exact = exact_wcol(&g, radius, Some(limit))?;
            writeln!(out, "wcol {}", exact.wcol)?;
            write!(out, "{}", format_ordering(&g, &exact.order))?;
            Ok(())
        }
        Command::LowerBound {
            graph,
            radius,
            method,
            trace,
        } => {
            let g = read_graph(&graph)?;
            match method {
                BoundMethod::Degeneracy => writeln!(out, "lower bound {}", degeneracy_bound(&g))?,
                BoundMethod::MmdPlus => {
                    let (bound, steps) = MmdPlus::new(&g, radius)?.run();
                    if trace {
                        for s in &steps {
                            let what = match s.action {
                                MmdAction::Contract(w) => format!("contract with {}", g.label(w)),
                                MmdAction::Delete => "delete".to_string(),
                            };
                            writeln!(
                                out,
                                "select {} degree {} {}",
                                g.label(s.vertex),
                                s.degree,
                                what
                            )?;
                        }
                    }
                    writeln!(out, "lower bound {bound}")?;
                }
            }
            Ok(())
        }
    }
}

fn run_optimize<W: Write>(args: OptimizeArgs, out: &mut W) -> Result<(), CliError> {
    let heuristic = Heuristic::from(args.heuristic);
    let turbo = Turbo::from(args.turbo);
    if !turbo.is_compatible(heuristic) {
        return Err(turbowcol::Error::Incompatible {
            heuristic: heuristic.name().into(),
            turbo: turbo.name().into(),
        }
        .into());
    }
    if !(args.timeout.is_finite() && args.timeout >= 0.0) {
        return Err(CliError::Usage(format!(
            "--timeout must be a non-negative number, got {}",
            args.timeout
        )));
    }
    let g = read_graph(&args.graph)?;
    let mut cfg = RunConfig::new(args.radius, heuristic, turbo);
    cfg.timeout = Some(Duration::from_secs_f64(args.timeout));
    cfg.seed = args.seed;
    cfg.merge_attempts = args.merge_attempts;
    let res = optimize(&g, &cfg)?;

    writeln!(out, "wcol {} (baseline {})", res.k, res.baseline_k)?;
    if let Some(path) = &args.order_out {
        write_file(path, format_ordering(&g, &res.order).as_bytes())?;
    }
    if let Some(path) = &args.stats_out {
        let record = StatsRecord::new(&instance_name(&args.graph), &g, &cfg, &res);
        let mut buf = Vec::new();
        emit_stats(&record, &mut buf)?;
        write_file(path, &buf)?;
    }
    Ok(())
}
