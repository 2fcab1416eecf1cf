use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use tradeoff_core::baselines::{mckp_search, nsga2_search, Nsga2Params};
use tradeoff_core::Aggregation;

use super::{finish_search, resolve_spaces, EvaluatorArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Mckp,
    Nsga2,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Space files, one per framework (optional with a synth evaluator).
    pub files: Vec<PathBuf>,

    #[arg(long, value_enum)]
    pub strategy: Strategy,

    /// nsga2: population size (even, at least 4).
    #[arg(long, default_value_t = 20)]
    pub population: usize,

    /// nsga2: populations evaluated, counting the initial one.
    #[arg(long, default_value_t = 12)]
    pub generations: usize,

    #[arg(long, default_value_t = 0.9)]
    pub crossover_rate: f64,

    #[arg(long, default_value_t = 0.15)]
    pub mutation_rate: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// nsga2: evaluation budget; overrides --generations with
    /// max(1, budget / population).
    #[arg(long)]
    pub budget: Option<usize>,

    #[command(flatten)]
    pub evaluator: EvaluatorArgs,

    /// Write the JSON search report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    pub fn nsga2_params(&self) -> CliResult<Nsga2Params> {
        let generations = match self.budget {
            Some(b) => (b / self.population.max(1)).max(1),
            None => self.generations,
        };
        let params = Nsga2Params {
            population_size: self.population,
            generations,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            seed: self.seed,
        };
        params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(params)
    }
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    let params = match args.strategy {
        Strategy::Nsga2 => Some(args.nsga2_params()?),
        Strategy::Mckp => None,
    };
    let backend = args.evaluator.backend()?;
    let inputs = args.evaluator.input_ids(&backend)?;
    let spaces = resolve_spaces(&args.files, &backend, &inputs)?;
    let outcome = match params {
        Some(p) => nsga2_search(&spaces, p, &backend, &inputs, Aggregation::Median)?,
        None => mckp_search(&spaces, &backend, &inputs, Aggregation::Median)?,
    };
    finish_search(&outcome, args.out.as_deref(), out)
}
