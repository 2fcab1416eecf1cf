use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use tradeoff_core::bench::{synth_generate, DEFAULT_ORACLE_CAP};
use tradeoff_core::combined::combine;
use tradeoff_core::{Error, Evaluator};

use super::{load_synth_spec, out_err};
use crate::error::CliResult;
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Synthetic benchmark spec (JSON).
    pub spec: PathBuf,

    /// Directory for `<framework>.csv` space files and `table.csv`.
    #[arg(long, default_value = "generated")]
    pub out_dir: PathBuf,

    /// Skip the full measured-data table.
    #[arg(long)]
    pub no_table: bool,
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    let bench = synth_generate(&load_synth_spec(&args.spec)?)?;
    let spaces = bench.training_spaces()?;
    for space in &spaces {
        let name = format!("{}.csv", space.framework_id());
        io::write_output(&args.out_dir.join(&name), &io::write_space(space))?;
        writeln!(out, "{name}: {} configurations", space.len()).map_err(out_err)?;
    }
    if args.no_table {
        return Ok(());
    }
    let size = bench.combined_size();
    if size > DEFAULT_ORACLE_CAP {
        return Err(Error::CapExceeded {
            size,
            cap: DEFAULT_ORACLE_CAP,
        }
        .into());
    }
    let sets: BTreeMap<_, _> = bench
        .frameworks()
        .iter()
        .map(|f| (f.id.clone(), f.configurations().into_iter().collect()))
        .collect();
    let inputs = bench.inputs().all();
    let mut rows = Vec::new();
    for config in combine(&sets)? {
        for input in &inputs {
            let point = bench.evaluate(&config, input)?;
            rows.push((config.clone(), input.clone(), point));
        }
    }
    let n = rows.len();
    io::write_output(&args.out_dir.join("table.csv"), &io::table_csv(rows)?)?;
    writeln!(
        out,
        "table.csv: {n} rows ({size} configurations x {} inputs)",
        inputs.len()
    )
    .map_err(out_err)?;
    Ok(())
}
