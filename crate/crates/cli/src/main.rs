use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use oskip::automaton::DEFAULT_MAX_STEPS;
use oskip::experiment::{run_experiment_with, to_csv, ExperimentConfig, Figure};
use oskip::graphs::{to_edge_list, GraphSpec};
use oskip::rng::replication;
use oskip::verify::{empirical_distribution, stationary_distribution, tv_distance, tv_threshold};
use oskip::{Error, Fugacities, Graph, HardcoreSampler, SamplerKind};

#[derive(Parser)]
#[command(name = "oskip", version, about = "Perfect sampling of hard-core configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw independent sets from the hard-core distribution.
    Sample(SampleArgs),
    /// Compare a sampler against the enumerated distribution.
    Verify(VerifyArgs),
    /// Run a benchmark sweep and print CSV.
    Bench(BenchArgs),
    /// Generate a graph as an edge list.
    Graph(GraphArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// star:<n>, ba:<n>[:<seed>], path:<n>, complete:<n> or file:<path>
    #[arg(long)]
    graph: GraphSpec,
    /// Fugacity: a number, or a file of `v λ(v)` lines.
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value = "oracle")]
    sampler: SamplerKind,
    /// Swap probability of the Dyer–Greenhill chain.
    #[arg(long, default_value_t = 1.0)]
    ps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Letter budget per sample.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_letters: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Print the work counters of each sample as JSON on stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["figure", "config"]))]
struct BenchArgs {
    /// fig3, fig4 or fig5
    #[arg(long)]
    figure: Option<Figure>,
    /// Key=value experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fraction of the figure's replication count.
    #[arg(long, default_value_t = 1.0, conflicts_with = "config")]
    scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    gen: GraphSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(args) => sample(args),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => bench(args),
        Command::Graph(args) => graph(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

/// Parses a weighted fugacity file: one `v λ(v)` pair per line for every
/// vertex, `#` starting a comment.
fn parse_fugacity_file(text: &str, n: usize) -> oskip::Result<Fugacities> {
    let mut values = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let mut fields = line.split_whitespace();
        let (Some(v), Some(l), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad(format!("expected `v λ(v)`, got `{line}`")));
        };
        let v: usize = v.parse().map_err(|_| bad(format!("bad vertex `{v}`")))?;
        let l: f64 = l.parse().map_err(|_| bad(format!("bad fugacity `{l}`")))?;
        let slot = values
            .get_mut(v)
            .ok_or_else(|| bad(format!("vertex {v} out of range 0..{n}")))?;
        if slot.replace(l).is_some() {
            return Err(bad(format!("vertex {v} listed twice")));
        }
    }
    let values: Option<Vec<f64>> = values.into_iter().collect();
    let values = values.ok_or_else(|| Error::InvalidParameter("fugacity file must list every vertex".into()))?;
    Fugacities::from_values(values)
}

fn fugacities(lambda: &str, n: usize) -> oskip::Result<Fugacities> {
    match lambda.parse::<f64>() {
        Ok(value) => Fugacities::uniform(n, value),
        Err(_) => parse_fugacity_file(&fs::read_to_string(lambda)?, n),
    }
}

fn build_model(model: &ModelArgs) -> oskip::Result<(Arc<Graph>, HardcoreSampler)> {
    let graph = Arc::new(model.graph.build(model.seed)?);
    let fug = fugacities(&model.lambda, graph.vertex_count())?;
    let sampler = HardcoreSampler::new(model.sampler, Arc::clone(&graph), fug, model.ps)?;
    Ok((graph, sampler))
}

fn sample(args: SampleArgs) -> oskip::Result<ExitCode> {
    let (_, sampler) = build_model(&args.model)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for i in 0..args.count {
        let drawn = sampler.sample(&mut replication(args.model.seed, i as u64), args.model.max_letters)?;
        writeln!(out, "{}", drawn.state)?;
        if args.stats {
            let json = serde_json::to_string(&drawn.stats).map_err(|e| Error::Io(e.to_string()))?;
            eprintln!("{json}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> oskip::Result<ExitCode> {
    let (graph, sampler) = build_model(&args.model)?;
    let fug = fugacities(&args.model.lambda, graph.vertex_count())?;
    let exact = stationary_distribution(&graph, &fug)?;
    let budget = args.model.max_letters;
    let empirical = empirical_distribution(args.reps, args.model.seed, |rng| Ok(sampler.sample(rng, budget)?.state))?;
    let tv = tv_distance(&exact, &empirical);
    let threshold = tv_threshold(exact.support_len(), args.reps);
    let pass = tv <= threshold;
    println!(
        "{} tv={tv:.6} threshold={threshold:.6}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn write_output(out: Option<&Path>, text: &str) -> oskip::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn bench(args: BenchArgs) -> oskip::Result<ExitCode> {
    let mut config = match (&args.figure, &args.config) {
        (Some(figure), _) => figure.config(args.scale, args.seed.unwrap_or(0))?,
        (None, Some(path)) => ExperimentConfig::parse(&fs::read_to_string(path)?)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.out.is_some() {
        config.output = args.out.clone();
    }
    let rows = run_experiment_with(&config, |row| {
        eprintln!(
            "{} {} λ={}: {} reps, mean letters {:.1}",
            row.graph, row.sampler, row.lambda, row.replications, row.mean_letters
        );
        if row.is_flagged() {
            eprintln!("warning: {} replications exhausted the letter budget", row.exhausted);
        }
    })?;
    write_output(config.output.as_deref(), &to_csv(&rows))?;
    Ok(ExitCode::SUCCESS)
}

fn graph(args: GraphArgs) -> oskip::Result<ExitCode> {
    let g = args.gen.build(args.seed)?;
    write_output(args.out.as_deref(), &to_edge_list(&g))?;
    Ok(ExitCode::SUCCESS)
}
