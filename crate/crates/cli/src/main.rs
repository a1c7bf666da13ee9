mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use xclust_core::batch::{bench, sweep};
use xclust_core::ingest::{load_dataset_file, load_embedding_file};
use xclust_core::{
    build_dendrogram, fit_prior, pca_embedding, Dataset, Embedding, Hyperparameters, Linkage,
    SchemaSpec, SearchBudget, SearchContext, SolutionDocument,
};

#[derive(Debug, Parser)]
#[command(name = "xclust", version, about = "Explainable clustering of 2D embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search once and write the solution document and a report.
    Run(RunArgs),
    /// Search every (alpha, beta) pair of a grid.
    Sweep(SweepArgs),
    /// Iterations reached within each time limit.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
#[group(id = "embedding_source", required = true, multiple = false)]
struct EmbeddingSource {
    /// Delimited file with one x,y row per data row.
    #[arg(long)]
    embedding: Option<PathBuf>,
    /// Use the first two principal components of the data.
    #[arg(long)]
    pca: bool,
}

#[derive(Debug, Args)]
struct Input {
    /// Delimited data file with a header row.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    source: EmbeddingSource,
    /// JSON column declarations overriding type inference.
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long, default_value = "single")]
    linkage: Linkage,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_parser = non_negative, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_parser = at_least_one, allow_negative_numbers = true)]
    beta: f64,
    /// Wall-clock budget in milliseconds.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: u64,
    /// Stop after this many iterations instead of on the clock.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iteration_cap: Option<u64>,
    /// Solution document path; the report goes next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_delimiter = ',', required = true, value_parser = non_negative, allow_negative_numbers = true)]
    alpha_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = at_least_one, allow_negative_numbers = true)]
    beta_grid: Vec<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iteration_cap: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    /// Time limits in milliseconds.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    time_limits: Vec<u64>,
    /// Subsample sizes; defaults to the full data.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(2..))]
    sizes: Vec<u64>,
    #[arg(long, default_value_t = 250.0, value_parser = non_negative, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.6, value_parser = at_least_one, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v < 0.0 {
        return Err(format!("must be >= 0, got {v}"));
    }
    Ok(v)
}

fn at_least_one(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v < 1.0 {
        return Err(format!("must be >= 1, got {v}"));
    }
    Ok(v)
}

fn load(input: &Input) -> Result<(Dataset, Embedding)> {
    let schema = input
        .schema
        .as_ref()
        .map(|p| -> Result<SchemaSpec> {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(SchemaSpec::from_json(&text)?)
        })
        .transpose()?;
    let loaded = load_dataset_file(&input.data, schema.as_ref())
        .with_context(|| format!("loading {}", input.data.display()))?;
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    let embedding = match &input.source.embedding {
        Some(p) => load_embedding_file(p, loaded.dataset.n())
            .with_context(|| format!("loading {}", p.display()))?,
        None => pca_embedding(&loaded.dataset)?,
    };
    Ok((loaded.dataset, embedding))
}

fn hyperparameters(
    alpha: f64,
    beta: f64,
    time_limit: u64,
    cap: Option<u64>,
    linkage: Linkage,
) -> Result<Hyperparameters> {
    let mut hp = Hyperparameters::new(alpha, beta)
        .with_time_budget(Duration::from_millis(time_limit))
        .with_linkage(linkage);
    if let Some(c) = cap {
        hp = hp.with_iteration_cap(c as usize);
    }
    hp.validate()?;
    Ok(hp)
}

fn report_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.report.txt"))
}

fn write_table<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let (data, emb) = load(&args.input)?;
    let hp = hyperparameters(args.alpha, args.beta, args.time_limit, args.iteration_cap, args.input.linkage)?;
    let prior = fit_prior(&data, hp.epsilon)?;
    let d = build_dendrogram(&emb, hp.linkage)?;
    let ctx = SearchContext::new(&data, &prior, &d)?;
    let (solution, trace) = ctx.greedy_search(&hp, &SearchBudget::from_hyperparameters(&hp))?;
    SolutionDocument::new(&data, &hp, Some(&solution), Some(&trace))
        .save(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    let report = report_path(&args.out);
    fs::write(&report, report::render(&data, &prior, &solution, &trace))
        .with_context(|| format!("writing {}", report.display()))?;
    log::info!(
        "k = {}, {} attributes, information {:.3} bits, {} iterations",
        solution.k(),
        solution.attribute_count(),
        solution.total_information,
        solution.iterations_completed
    );
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let (data, emb) = load(&args.input)?;
    let base = hyperparameters(0.0, 1.0, args.time_limit, args.iteration_cap, args.input.linkage)?;
    let prior = fit_prior(&data, base.epsilon)?;
    let d = build_dendrogram(&emb, base.linkage)?;
    let rows = sweep(&data, &prior, &d, &args.alpha_grid, &args.beta_grid, &base)?;
    write_table(&args.out, &rows)
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let (data, emb) = load(&args.input)?;
    let hp = hyperparameters(args.alpha, args.beta, 1, None, args.input.linkage)?;
    let sizes: Vec<usize> = if args.sizes.is_empty() {
        vec![data.n()]
    } else {
        args.sizes.iter().map(|&s| s as usize).collect()
    };
    let limits: Vec<Duration> = args.time_limits.iter().map(|&ms| Duration::from_millis(ms)).collect();
    let rows = bench(&data, &emb, &sizes, &limits, &hp, args.seed)?;
    write_table(&args.out, &rows)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bench(a) => run_bench(a),
    }
}
