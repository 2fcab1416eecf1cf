use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use tradeoff_core::boa::{boa_search, BoaMode, SigmoidParams};
use tradeoff_core::Aggregation;

use super::{finish_search, resolve_spaces, EvaluatorArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Simple,
    Flex,
    Prob,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Space files, one per framework. With a synth evaluator they may be
    /// omitted and the benchmark's own spaces are used.
    pub files: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "simple")]
    pub mode: Mode,

    /// flex: normalized distance to the frontier within which
    /// configurations are added.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// prob: distance at which inclusion probability is one half.
    #[arg(long, default_value_t = SigmoidParams::DEFAULT_BETA)]
    pub beta: f64,

    /// prob: steepness of the inclusion sigmoid.
    #[arg(long, default_value_t = SigmoidParams::DEFAULT_GAMMA)]
    pub gamma: f64,

    /// prob: random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub evaluator: EvaluatorArgs,

    /// Write the JSON search report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    pub fn mode(&self) -> CliResult<BoaMode> {
        Ok(match self.mode {
            Mode::Simple => BoaMode::Simple,
            Mode::Flex => BoaMode::Flex {
                threshold: self
                    .threshold
                    .ok_or_else(|| CliError::Usage("--mode flex requires --threshold".into()))?,
            },
            Mode::Prob => BoaMode::Prob {
                params: SigmoidParams::new(self.beta, self.gamma)?,
                seed: self.seed,
            },
        })
    }
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    let mode = args.mode()?;
    let backend = args.evaluator.backend()?;
    let inputs = args.evaluator.input_ids(&backend)?;
    let spaces = resolve_spaces(&args.files, &backend, &inputs)?;
    let outcome = boa_search(&spaces, &mode, &backend, &inputs, Aggregation::Median)?;
    finish_search(&outcome, args.out.as_deref(), out)
}
