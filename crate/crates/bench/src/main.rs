use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dcgraph::dropping::DropPolicy;
use dcgraph_bench::config::{BloomSizing, EngineKind, QueryKind, QuerySource, RunConfig};
use dcgraph_bench::generate::{power_law_edges, write_edge_list, PowerLawSpec};
use dcgraph_bench::{capacity_sweep, emit_report, parse_metrics, run_experiment, summarize, sweep_csv};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "bench", about = "Replay graph update workloads against the dcgraph engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay one workload and write a metrics file.
    Run(RunArgs),
    /// Find how many queries fit the budget, and at which drop probability.
    Sweep(SweepArgs),
    /// Summarize metrics files as a table and CSV.
    Report(ReportArgs),
    /// Write a synthetic power-law edge list.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Edge list: `src dst weight [label]` per line.
    #[arg(long)]
    dataset: PathBuf,
    /// Dataset has no weight column; weights 1..=10 are drawn from the seed.
    #[arg(long)]
    unweighted: bool,
    #[arg(long)]
    labeled: bool,
    #[arg(long, default_value = "jod")]
    engine: String,
    /// `random:p=0.5` or `degree:p=0.5,tau_min=2,tau_max_pct=80`.
    #[arg(long)]
    policy: Option<String>,
    /// Scripted update stream instead of splitting the dataset.
    #[arg(long)]
    updates: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    initial_fraction: f64,
    #[arg(long = "batches", default_value_t = 100)]
    batch_count: usize,
    #[arg(long, default_value_t = 1)]
    batch_size: usize,
    #[arg(long = "delete-frac", default_value_t = 0.0)]
    delete_fraction: f64,
    /// Modeled memory budget in bytes.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 10)]
    landmarks: usize,
    #[arg(long, default_value_t = 10.0)]
    bloom_bits_per_entry: f64,
    #[arg(long, default_value_t = 7)]
    bloom_hashes: u32,
    #[arg(long)]
    bloom_expected_entries: Option<u64>,
}

impl Common {
    fn config(&self, queries: QuerySource) -> Result<RunConfig> {
        let engine: EngineKind = self.engine.parse()?;
        let mut cfg = RunConfig::new(&self.dataset, queries, engine);
        cfg.weighted = !self.unweighted;
        cfg.labeled = self.labeled;
        cfg.policy = self.policy.as_deref().map(DropPolicy::parse).transpose()?;
        cfg.updates = self.updates.clone();
        cfg.initial_fraction = self.initial_fraction;
        cfg.batch_count = self.batch_count;
        cfg.batch_size = self.batch_size;
        cfg.delete_fraction = self.delete_fraction;
        cfg.budget = self.budget;
        cfg.seed = self.seed;
        cfg.workers = self.workers;
        cfg.landmarks = self.landmarks;
        cfg.bloom = BloomSizing {
            bits_per_entry: self.bloom_bits_per_entry,
            hashes: self.bloom_hashes,
            expected_entries: self.bloom_expected_entries,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Query file, or `gen:count=N,kind=spsp|khop|rpq|wcc|pagerank[,seed=S]`.
    #[arg(long)]
    queries: String,
    /// Metrics output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "spsp")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    query_seed: u64,
    #[arg(long)]
    queries_from: usize,
    #[arg(long)]
    queries_to: usize,
    #[arg(long, default_value_t = 1)]
    queries_step: usize,
    /// Comma-separated drop probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
    p_grid: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Metrics files, one run each.
    #[arg(required = true)]
    metrics: Vec<PathBuf>,
    /// Also write the CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    vertices: u32,
    #[arg(long, default_value_t = 8.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 2.1)]
    exponent: f64,
    /// Distinct edge labels; 0 writes an unlabeled file.
    #[arg(long, default_value_t = 0)]
    labels: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<()> {
    let queries: QuerySource = args.queries.parse()?;
    let cfg = args.common.config(queries)?;
    let outcome = run_experiment(&cfg)?;
    if outcome.oom() {
        eprintln!("run exceeded the memory budget after {} records", outcome.records.len());
    }
    emit(args.out.as_deref(), &outcome.metrics_text())
}

fn sweep(args: SweepArgs) -> Result<()> {
    if args.queries_step == 0 || args.queries_from == 0 || args.queries_from > args.queries_to {
        bail!("need 0 < --queries-from <= --queries-to and a positive step");
    }
    let kind: QueryKind = args.kind.parse()?;
    let queries = QuerySource::Generate {
        count: args.queries_to,
        kind,
        seed: args.query_seed,
    };
    let cfg = args.common.config(queries)?;
    let counts: Vec<usize> = (args.queries_from..=args.queries_to).step_by(args.queries_step).collect();
    let rows = capacity_sweep(&cfg, &counts, &args.p_grid)?;
    emit(args.out.as_deref(), &sweep_csv(&rows))
}

fn report(args: ReportArgs) -> Result<()> {
    let mut runs = Vec::new();
    for path in &args.metrics {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file = parse_metrics(&text).with_context(|| format!("parsing {}", path.display()))?;
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        runs.push(summarize(&name, &file));
    }
    let (text, csv) = emit_report(&runs);
    print!("{text}");
    if let Some(p) = &args.csv {
        emit(Some(p), &csv)?;
    }
    Ok(())
}

fn generate(args: GenArgs) -> Result<()> {
    let spec = PowerLawSpec {
        vertices: args.vertices,
        avg_degree: args.avg_degree,
        exponent: args.exponent,
        labels: args.labels,
        max_weight: 10,
        seed: args.seed,
    };
    let edges = power_law_edges(&spec);
    emit(Some(&args.out), &write_edge_list(&edges, args.labels > 0))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
        Command::Gen(a) => generate(a),
    }
}
