//! Experiment harness: sweeps of fugacity × sampler on one graph, with the
//! work counters of every run averaged into CSV rows.

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::DEFAULT_MAX_STEPS;
use crate::cftp::CftpStats;
use crate::error::{Error, Result};
use crate::graphs::GraphSpec;
use crate::hardcore::Fugacities;
use crate::rng::replication;
use crate::sampler::{HardcoreSampler, SamplerKind};

pub const CSV_HEADER: &str =
    "graph,sampler,lambda,reps,mean_letters,se_letters,mean_updates,se_updates,mean_tau_b,se_tau_b";

/// Fugacities swept when reproducing a figure, cut at the figure's axis
/// limit (1000 for the star graphs, 100 for Barabási–Albert).
pub const FIGURE_LAMBDAS: [f64; 10] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];

/// Seed of the Barabási–Albert graph used for figure 5.
pub const FIGURE_BA_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub samplers: Vec<SamplerKind>,
    pub lambdas: Vec<f64>,
    pub swap_probability: f64,
    pub replications: usize,
    pub seed: u64,
    pub max_letters: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, samplers: Vec<SamplerKind>, lambdas: Vec<f64>, replications: usize) -> Self {
        Self {
            graph,
            samplers,
            lambdas,
            swap_probability: 1.0,
            replications,
            seed: 0,
            max_letters: DEFAULT_MAX_STEPS,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidParameter(m));
        if self.replications == 0 {
            return invalid("replications must be at least 1".into());
        }
        if self.samplers.is_empty() {
            return invalid("no sampler selected".into());
        }
        if self.lambdas.is_empty() {
            return invalid("no fugacity selected".into());
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return invalid(format!("fugacity must be positive, got {l}"));
        }
        if !(0.0..=1.0).contains(&self.swap_probability) {
            return invalid(format!(
                "swap probability must lie in [0, 1], got {}",
                self.swap_probability
            ));
        }
        Ok(())
    }

    /// Parses `key = value` lines. Keys: `graph`, `sampler` (comma list),
    /// `lambda` (comma list), `ps`, `reps`, `seed`, `max_letters`, `out`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph = None;
        let mut samplers = None;
        let mut lambdas = None;
        let mut reps = None;
        let mut config_rest = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number_err = |e: &dyn fmt::Display| err(format!("bad value `{value}` for `{key}`: {e}"));
            match key {
                "graph" => graph = Some(value.parse::<GraphSpec>().map_err(|e| number_err(&e))?),
                "sampler" | "samplers" => {
                    samplers = Some(
                        split_list(value)
                            .map(|s| s.parse::<SamplerKind>())
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| number_err(&e))?,
                    )
                }
                "lambda" | "lambdas" => {
                    lambdas = Some(
                        split_list(value)
                            .map(|s| s.parse::<f64>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|e| number_err(&e))?,
                    )
                }
                "reps" | "replications" => reps = Some(value.parse::<usize>().map_err(|e| number_err(&e))?),
                "ps" | "seed" | "max_letters" | "out" => config_rest.push((i, key.to_string(), value.to_string())),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        let missing = |key: &str| Error::Parse {
            line: text.lines().count().max(1),
            message: format!("missing key `{key}`"),
        };
        let mut config = ExperimentConfig::new(
            graph.ok_or_else(|| missing("graph"))?,
            samplers.ok_or_else(|| missing("sampler"))?,
            lambdas.ok_or_else(|| missing("lambda"))?,
            reps.ok_or_else(|| missing("reps"))?,
        );
        for (i, key, value) in config_rest {
            let err = |e: &dyn fmt::Display| Error::Parse {
                line: i + 1,
                message: format!("bad value `{value}` for `{key}`: {e}"),
            };
            match key.as_str() {
                "ps" => config.swap_probability = value.parse().map_err(|e| err(&e))?,
                "seed" => config.seed = value.parse().map_err(|e| err(&e))?,
                "max_letters" => config.max_letters = value.parse().map_err(|e| err(&e))?,
                _ => config.output = Some(PathBuf::from(value)),
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Averages over the replications of one (sampler, λ) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub graph: String,
    pub sampler: SamplerKind,
    pub lambda: f64,
    /// Replications that completed within the letter budget; the means
    /// below are over these.
    pub replications: usize,
    /// Replications abandoned on budget exhaustion.
    pub exhausted: usize,
    pub mean_letters: f64,
    pub se_letters: f64,
    pub mean_updates: f64,
    pub se_updates: f64,
    pub mean_tau_b: f64,
    pub se_tau_b: f64,
}

impl ResultRow {
    pub fn is_flagged(&self) -> bool {
        self.exhausted > 0
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.graph,
            self.sampler,
            self.lambda,
            self.replications,
            self.mean_letters,
            self.se_letters,
            self.mean_updates,
            self.se_updates,
            self.mean_tau_b,
            self.se_tau_b
        )
    }
}

/// Sample mean and standard error `sd/√n`.
fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Runs every (sampler, λ) cell of `config`, sampler-major, calling
/// `on_row` as each row completes.
pub fn run_experiment_with<F>(config: &ExperimentConfig, mut on_row: F) -> Result<Vec<ResultRow>>
where
    F: FnMut(&ResultRow),
{
    config.validate()?;
    let graph = Arc::new(config.graph.build(config.seed)?);
    let mut rows = Vec::new();
    for &kind in &config.samplers {
        for &lambda in &config.lambdas {
            let fugacities = Fugacities::uniform(graph.vertex_count(), lambda)?;
            let sampler = HardcoreSampler::new(kind, Arc::clone(&graph), fugacities, config.swap_probability)?;
            let outcomes: Vec<Result<CftpStats>> = (0..config.replications)
                .into_par_iter()
                .map(|i| {
                    let mut rng = replication(config.seed, i as u64);
                    sampler.sample(&mut rng, config.max_letters).map(|s| s.stats)
                })
                .collect();
            let mut done = Vec::with_capacity(outcomes.len());
            let mut exhausted = 0;
            for outcome in outcomes {
                match outcome {
                    Ok(stats) => done.push(stats),
                    Err(Error::BudgetExhausted(_)) => exhausted += 1,
                    Err(e) => return Err(e),
                }
            }
            let (mean_letters, se_letters) = mean_and_se(done.iter().map(|s| s.letters_drawn as f64));
            let (mean_updates, se_updates) = mean_and_se(done.iter().map(|s| s.bound_updates as f64));
            let (mean_tau_b, se_tau_b) = mean_and_se(done.iter().map(|s| s.backward_time as f64));
            let row = ResultRow {
                graph: config.graph.to_string(),
                sampler: kind,
                lambda,
                replications: done.len(),
                exhausted,
                mean_letters,
                se_letters,
                mean_updates,
                se_updates,
                mean_tau_b,
                se_tau_b,
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    run_experiment_with(config, |_| {})
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.csv_line());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Star graph with 100 leaves, all three samplers, 1000 replications.
    Fig3,
    /// Star graph with 1000 leaves, DG and oracle, 100 replications.
    Fig4,
    /// Barabási–Albert graph on 100 vertices, all three samplers, 100
    /// replications.
    Fig5,
}

impl Figure {
    /// Sweep of this figure with replication counts multiplied by `scale`.
    pub fn config(self, scale: f64, seed: u64) -> Result<ExperimentConfig> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scale must lie in (0, 1], got {scale}"
            )));
        }
        let (graph, samplers, base_reps, max_lambda) = match self {
            Figure::Fig3 => (GraphSpec::Star(100), SamplerKind::ALL.to_vec(), 1000, 1000.0),
            Figure::Fig4 => (
                GraphSpec::Star(1000),
                vec![SamplerKind::Dg, SamplerKind::Oracle],
                100,
                1000.0,
            ),
            Figure::Fig5 => (
                GraphSpec::BarabasiAlbert {
                    n: 100,
                    seed: Some(FIGURE_BA_SEED),
                },
                SamplerKind::ALL.to_vec(),
                100,
                100.0,
            ),
        };
        let lambdas = FIGURE_LAMBDAS.iter().copied().filter(|&l| l <= max_lambda).collect();
        let reps = ((base_reps as f64 * scale).round() as usize).max(1);
        let mut config = ExperimentConfig::new(graph, samplers, lambdas, reps);
        config.seed = seed;
        Ok(config)
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            _ => Err(Error::InvalidParameter(format!(
                "unknown figure `{s}` (expected fig3, fig4 or fig5)"
            ))),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        })
    }
}

pub fn reproduce_figure(figure: Figure, scale: f64, seed: u64) -> Result<Vec<ResultRow>> {
    run_experiment(&figure.config(scale, seed)?)
}
