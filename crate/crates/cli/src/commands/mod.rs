pub mod baseline;
pub mod combine;
pub mod compare;
pub mod generate;
pub mod pareto;
pub mod study;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use tradeoff_core::bench::{synth_generate, SynthSpec, SyntheticBenchmark, TableEvaluator};
use tradeoff_core::viper::format_sig6;
use tradeoff_core::{CombinedConfiguration, Evaluator, SearchOutcome, TradeoffPoint, TradeoffSpace};

use crate::error::{CliError, CliResult};
use crate::io;

/// Where combined configurations get measured.
pub enum Backend {
    Table(TableEvaluator),
    Synth(SyntheticBenchmark),
}

impl Evaluator for Backend {
    fn evaluate(&self, config: &CombinedConfiguration, input_id: &str) -> tradeoff_core::Result<TradeoffPoint> {
        match self {
            Backend::Table(t) => t.evaluate(config, input_id),
            Backend::Synth(s) => s.evaluate(config, input_id),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputSelection {
    Train,
    Test,
    All,
}

/// Evaluator flags shared by `combine` and `baseline`.
#[derive(Debug, clap::Args)]
pub struct EvaluatorArgs {
    /// Measurement backend: `table:FILE` (measured-data CSV) or `synth:FILE`
    /// (synthetic benchmark spec JSON).
    #[arg(long, value_name = "KIND:FILE")]
    pub evaluator: String,

    /// Input subset to evaluate on. Ids starting with `train` / `test` form
    /// the split; a table without such ids treats every input as both.
    #[arg(long, value_enum, default_value = "all")]
    pub inputs: InputSelection,
}

pub fn load_synth_spec(path: &Path) -> CliResult<SynthSpec> {
    serde_json::from_str(&io::read_to_string(path)?)
        .map_err(|e| CliError::Data(format!("{}: bad synthetic spec: {e}", path.display())))
}

impl EvaluatorArgs {
    pub fn backend(&self) -> CliResult<Backend> {
        let (kind, file) = self.evaluator.split_once(':').ok_or_else(|| {
            CliError::Usage(format!(
                "--evaluator `{}` must look like table:FILE or synth:FILE",
                self.evaluator
            ))
        })?;
        let path = PathBuf::from(file);
        match kind {
            "table" => Ok(Backend::Table(io::read_table(&path)?)),
            "synth" => Ok(Backend::Synth(synth_generate(&load_synth_spec(&path)?)?)),
            other => Err(CliError::Usage(format!("unknown evaluator kind `{other}`"))),
        }
    }

    pub fn input_ids(&self, backend: &Backend) -> CliResult<Vec<String>> {
        let (train, test) = match backend {
            Backend::Synth(s) => (s.inputs().training.clone(), s.inputs().test.clone()),
            Backend::Table(t) => {
                let all = t.input_ids();
                let train: Vec<String> = all.iter().filter(|i| i.starts_with("train")).cloned().collect();
                let test: Vec<String> = all.iter().filter(|i| i.starts_with("test")).cloned().collect();
                if train.is_empty() && test.is_empty() {
                    (all.clone(), all)
                } else {
                    (train, test)
                }
            }
        };
        let ids = match self.inputs {
            InputSelection::Train => train,
            InputSelection::Test => test,
            InputSelection::All => {
                let mut v = train;
                v.extend(test);
                v.sort();
                v.dedup();
                v
            }
        };
        if ids.is_empty() {
            return Err(CliError::Data(
                format!("evaluator has no {:?} inputs", self.inputs).to_lowercase(),
            ));
        }
        Ok(ids)
    }
}

/// Space files, or the synthetic benchmark's own spaces when none are given.
pub fn resolve_spaces(files: &[PathBuf], backend: &Backend, inputs: &[String]) -> CliResult<Vec<TradeoffSpace>> {
    if !files.is_empty() {
        return files.iter().map(|f| io::read_space(f)).collect();
    }
    match backend {
        Backend::Synth(s) => Ok(s.spaces(inputs, tradeoff_core::Aggregation::Median)?),
        Backend::Table(_) => Err(CliError::Usage(
            "space files are required with a table evaluator".into(),
        )),
    }
}

pub fn report_json(outcome: &SearchOutcome) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&outcome.report()).map_err(|e| CliError::Data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn print_summary(outcome: &SearchOutcome, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "strategy: {}", outcome.strategy).map_err(out_err)?;
    for (id, n) in &outcome.audit.candidates_per_framework {
        writeln!(out, "candidates {id}: {n}").map_err(out_err)?;
    }
    writeln!(out, "combined explored: {}", outcome.audit.combined_explored).map_err(out_err)?;
    writeln!(out, "evaluations: {}", outcome.audit.evaluations_performed).map_err(out_err)?;
    writeln!(out, "frontier size: {}", outcome.frontier.len()).map_err(out_err)?;
    for r in outcome.frontier.points() {
        writeln!(
            out,
            "  {}  loss={}  runtime={}",
            r.config,
            format_sig6(r.point.accuracy_loss()),
            format_sig6(r.point.runtime())
        )
        .map_err(out_err)?;
    }
    Ok(())
}

pub fn finish_search(outcome: &SearchOutcome, report: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    print_summary(outcome, out)?;
    if let Some(path) = report {
        io::write_output(path, &report_json(outcome)?)?;
    }
    Ok(())
}

pub(crate) fn out_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("writing output: {e}"))
}
