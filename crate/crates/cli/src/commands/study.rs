use std::io::Write;
use std::path::PathBuf;

use tradeoff_core::bench::DEFAULT_ORACLE_CAP;
use tradeoff_core::boa::SigmoidParams;

use super::out_err;
use crate::error::{CliError, CliResult};
use crate::io;
use crate::study::{desk_suite, rows_csv, run_study, summary_markdown, StudyInput, StudyOptions, StudyStrategy};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Synthetic spec JSON: one spec, or an object mapping app names to
    /// specs. Defaults to the built-in five-app suite.
    pub spec: Option<PathBuf>,

    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "boa-simple,boa-flex,boa-prob,mckp,nsga2"
    )]
    pub strategies: Vec<StudyStrategy>,

    /// Seeds; each offsets every app's own seed.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,

    /// boa-flex distance threshold.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,

    #[arg(long, default_value_t = SigmoidParams::DEFAULT_BETA)]
    pub beta: f64,

    #[arg(long, default_value_t = SigmoidParams::DEFAULT_GAMMA)]
    pub gamma: f64,

    /// Largest combined space the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: u128,

    /// Output prefix; writes `<prefix>.csv` and `<prefix>.md`.
    #[arg(long, default_value = "study")]
    pub out: String,
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    let apps = match &args.spec {
        Some(path) => serde_json::from_str::<StudyInput>(&io::read_to_string(path)?)
            .map_err(|e| CliError::Data(format!("{}: bad study spec: {e}", path.display())))?
            .into_apps(),
        None => desk_suite(),
    };
    let options = StudyOptions {
        threshold: args.threshold,
        sigmoid: SigmoidParams::new(args.beta, args.gamma)?,
        oracle_cap: args.oracle_cap,
    };
    let rows = run_study(&apps, &args.strategies, &args.seeds, &options)?;
    io::write_output(&PathBuf::from(format!("{}.csv", args.out)), &rows_csv(&rows))?;
    let md = summary_markdown(&rows);
    io::write_output(&PathBuf::from(format!("{}.md", args.out)), &md)?;
    out.write_all(md.as_bytes()).map_err(out_err)?;
    Ok(())
}
