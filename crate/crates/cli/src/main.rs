//! `patrol` — plan and evaluate closed patrol walks that minimize the
//! maximum weighted revisit time.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use patrol_cli::case_study;
use patrol_cli::error::{Error, Result};
use patrol_cli::experiment::{self, ExperimentSpec};
use patrol_cli::matrix::{self, MatrixMode};
use patrol_cli::tsplib;
use patrol_core::planner::{self, Algorithm, PlanConfig};
use patrol_core::walk::walk_cost;
use patrol_core::{MetricGraph, MonitorGraph};

#[derive(Parser)]
#[command(name = "patrol", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Brute,
    Smart,
    Tsp,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Algorithm {
        match a {
            AlgArg::Brute => Algorithm::Brute,
            AlgArg::Smart => Algorithm::Smart,
            AlgArg::Tsp => Algorithm::TspBaseline,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symmetric,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// TSPLIB EUC_2D coordinate file
    #[arg(long, conflicts_with = "matrix")]
    coords: Option<PathBuf>,
    /// Travel-time matrix file (first line n, then n rows)
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// How to symmetrize a matrix input
    #[arg(long, value_enum, default_value = "average")]
    mode: ModeArg,
    /// Weight file: one `id weight` per line, overrides existing weights
    #[arg(long)]
    weights: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<MonitorGraph> {
        let g = match (&self.coords, &self.matrix) {
            (Some(p), None) => tsplib::parse(p)?,
            (None, Some(p)) => {
                let mode = match self.mode {
                    ModeArg::Symmetric => MatrixMode::Symmetric,
                    ModeArg::Average => MatrixMode::Average,
                };
                matrix::parse(p, mode)?
            }
            _ => {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::InvalidInput,
                    "exactly one of --coords or --matrix is required",
                )))
            }
        };
        match &self.weights {
            Some(w) => matrix::apply_weights(g, &matrix::parse_weights(w)?),
            None => Ok(g),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn write(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, content)?,
            None => println!("{content}"),
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan a patrol walk for a graph read from a file
    Plan {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "smart")]
        alg: AlgArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Re-solve each block from its anchor after assembly
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        refine: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a kernel (file of whitespace-separated vertex ids)
    Eval {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        kernel: PathBuf,
        /// Report costs in pre-normalization weight units
        #[arg(long, default_value_t = false)]
        raw: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive optimal search on a tiny instance
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        max_kernel: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate an instance family to files
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Run the bundled San Francisco patrol case study
    CaseStudy {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Planner-vs-baseline sweep over B values and seeds
    Bench {
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Comma-separated list of B values
        #[arg(long = "B", value_delimiter = ',', default_value = "4,16,64,256,1024")]
        b: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, value_enum, default_value = "smart")]
        alg: AlgArg,
        /// Attach kernels and blocks to each JSON record
        #[arg(long, default_value_t = false)]
        walks: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Weight-1 center with light leaves; tours are far from optimal
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// k nested levels of s vertices with geometrically dropping weights
    Nested {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Half heavy vertices clustered tightly, half light ones far away
    HeavyLight {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform random points with dyadic-bucket weights
    Euclidean {
        #[arg(long)]
        n: usize,
        #[arg(long = "B", default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "box", value_delimiter = 'x', default_value = "1000x1000")]
        box_size: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn plan_json(mg: &MetricGraph, plan: &patrol_core::BlockPlan, raw: bool) -> Result<serde_json::Value> {
    let report = walk_cost(mg, &plan.kernel(), raw)?;
    let lb = planner::lower_bound_opt(mg);
    let label = |v: usize| mg.base().label(v).to_string();
    Ok(json!({
        "cost": report.max_cost,
        "argmax_vertex": label(report.argmax_vertex),
        "kernel_length": report.kernel_length,
        "lower_bound": lb,
        "ratio": if lb > 0.0 { Some(report.max_cost / lb) } else { None },
        "anchor": label(plan.anchor),
        "kernel": plan.kernel().iter().map(|&v| label(v)).collect::<Vec<_>>(),
        "blocks": plan.blocks.iter().map(|b| b.iter().map(|&v| label(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "per_vertex": (0..mg.len()).map(|v| json!({
            "id": label(v),
            "latency": report.per_vertex[v].0,
            "cost": report.per_vertex[v].1,
        })).collect::<Vec<_>>(),
    }))
}

fn write_graph_as_matrix(g: &MonitorGraph, out: &Path) -> Result<()> {
    let mg = MetricGraph::close(g.clone())?;
    let n = g.len();
    let mut text = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| mg.dist(i, j).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(out, text)?;
    let mut wtext = String::new();
    for v in 0..n {
        wtext.push_str(&format!("{} {}\n", v + 1, g.raw_weight(v)));
    }
    std::fs::write(out.with_extension("weights"), wtext)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan { input, alg, seed, refine, output } => {
            let mg = MetricGraph::close(input.load()?)?;
            let cfg = PlanConfig {
                algorithm: alg.into(),
                refine,
                rng_seed: seed,
                ..PlanConfig::default()
            };
            let plan = planner::plan(&mg, &cfg)?;
            let value = plan_json(&mg, &plan, mg.base().has_raw_weights())?;
            output.write(&serde_json::to_string_pretty(&value).expect("json"))
        }
        Command::Eval { input, kernel, raw, output } => {
            let mg = MetricGraph::close(input.load()?)?;
            let text = std::fs::read_to_string(&kernel)?;
            let ids: Vec<usize> = text
                .split_whitespace()
                .map(|tok| {
                    mg.base()
                        .index_of(tok)
                        .ok_or_else(|| patrol_core::Error::UnknownVertex(tok.into()).into())
                })
                .collect::<Result<_>>()?;
            let report = walk_cost(&mg, &ids, raw)?;
            let label = |v: usize| mg.base().label(v).to_string();
            let value = json!({
                "cost": report.max_cost,
                "argmax_vertex": label(report.argmax_vertex),
                "kernel_length": report.kernel_length,
                "per_vertex": (0..mg.len()).map(|v| json!({
                    "id": label(v),
                    "latency": report.per_vertex[v].0,
                    "cost": report.per_vertex[v].1,
                })).collect::<Vec<_>>(),
            });
            output.write(&serde_json::to_string_pretty(&value).expect("json"))
        }
        Command::Oracle { input, max_kernel, output } => {
            let mg = MetricGraph::close(input.load()?)?;
            let res = patrol_core::oracle::brute_force_optimal(&mg, max_kernel)?;
            let label = |v: usize| mg.base().label(v).to_string();
            let value = json!({
                "best_cost": res.best_cost,
                "best_kernel": res.best_kernel.iter().map(|&v| label(v)).collect::<Vec<_>>(),
                "kernels_examined": res.kernels_examined,
                "exhausted": res.exhausted,
            });
            output.write(&serde_json::to_string_pretty(&value).expect("json"))
        }
        Command::Gen { family } => match family {
            GenFamily::Star { n, out } => {
                write_graph_as_matrix(&patrol_core::gen::gen_star(n)?, &out)
            }
            GenFamily::Nested { k, s, out } => {
                let (g, _) = patrol_core::gen::gen_nested(k, s)?;
                write_graph_as_matrix(&g, &out)
            }
            GenFamily::HeavyLight { n, eps, out } => {
                write_graph_as_matrix(&patrol_core::gen::gen_heavy_light(n, eps)?, &out)
            }
            GenFamily::Euclidean { n, b, seed, box_size, out } => {
                if box_size.len() != 2 {
                    return Err(patrol_core::Error::BadParam(
                        "--box expects WIDTHxHEIGHT".into(),
                    )
                    .into());
                }
                let g = patrol_core::gen::gen_euclidean(n, [box_size[0], box_size[1]], seed)?
                    .with_weights(patrol_core::gen::sample_weights(n, b, seed)?)?;
                let points = g.points().expect("euclidean instances keep coordinates");
                std::fs::write(&out, tsplib::emit("euclidean", points))?;
                let mut wtext = String::new();
                for v in 0..g.len() {
                    wtext.push_str(&format!("{} {}\n", g.label(v), g.raw_weight(v)));
                }
                std::fs::write(out.with_extension("weights"), wtext)?;
                Ok(())
            }
        },
        Command::CaseStudy { output } => {
            let cs = case_study::run_case_study()?;
            let g = cs.graph.base();
            let value = json!({
                "blocks": cs.plan.blocks.iter()
                    .map(|b| b.iter().map(|&v| g.label(v).to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "max_cost": cs.report.max_cost,
                "argmax_vertex": g.label(cs.report.argmax_vertex),
                "kernel_length_seconds": cs.report.kernel_length,
                "lower_bound": cs.report.lower_bound,
                "per_vertex": (0..g.len()).map(|v| json!({
                    "id": g.label(v),
                    "latency_seconds": cs.report.per_vertex[v].0,
                    "cost": cs.report.per_vertex[v].1,
                })).collect::<Vec<_>>(),
            });
            output.write(&serde_json::to_string_pretty(&value).expect("json"))
        }
        Command::Bench { n, b, seeds, alg, walks, output } => {
            let spec = ExperimentSpec {
                n,
                b_values: b,
                seeds: (0..seeds).collect(),
                algorithm: alg.into(),
                include_walks: walks,
                ..Default::default()
            };
            let records = experiment::run_experiment(&spec)?;
            let (wins, trials, p) = experiment::ratio_trend(&records);
            eprintln!("ratio decreased for {wins}/{trials} seeds (sign test p = {p:.4})");
            let content = match output.format {
                FormatArg::Json => experiment::to_json(&records),
                FormatArg::Csv => experiment::to_csv(&records),
            };
            output.write(&content)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
