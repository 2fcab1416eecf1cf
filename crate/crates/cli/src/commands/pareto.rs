use std::io::Write;
use std::path::PathBuf;

use tradeoff_core::pareto_extract;
use tradeoff_core::viper::{render_scatter, ChartStyle};

use super::out_err;
use crate::error::CliResult;
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Space file.
    pub file: PathBuf,

    /// Also write a scatter plot of the space with the frontier overlaid.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    let space = io::read_space(&args.file)?;
    let frontier = pareto_extract(&space)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut rows = vec![["configuration".to_string(), "accuracy_loss".into(), "runtime".into()]];
    for r in frontier.points() {
        rows.push([
            r.config.to_string(),
            r.point.accuracy_loss().to_string(),
            r.point.runtime().to_string(),
        ]);
    }
    for row in rows {
        w.write_record(row).map_err(|e| crate::CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::CliError::Data(e.to_string()))?;
    out.write_all(&bytes).map_err(out_err)?;
    if let Some(path) = args.svg {
        let all: Vec<_> = space.points().collect();
        let style = ChartStyle {
            title: Some(format!("{} trade-off space", space.framework_id())),
            ..Default::default()
        };
        io::write_output(&path, &render_scatter(&all, &frontier.tradeoffs(), &style)?)?;
    }
    Ok(())
}
