use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use tradeoff_core::metrics::difference_of_coverage;
use tradeoff_core::pareto::lower_convex_hull;
use tradeoff_core::viper::{
    best_framework_bands, compute_pir, format_sig6, render_chart, ChartStyle, DEFAULT_GRANULARITY,
};
use tradeoff_core::{pareto_extract, TradeoffPoint};

use super::out_err;
use crate::error::{CliError, CliResult};
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Two or more space files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,

    /// Framework id used as the PIR baseline (default: first file's framework).
    #[arg(long)]
    pub baseline: Option<String>,

    /// Accuracy-loss samples across the comparison range.
    #[arg(long, default_value_t = DEFAULT_GRANULARITY)]
    pub granularity: usize,

    /// Output prefix; writes `<prefix>.csv` and `<prefix>.svg`.
    #[arg(long, default_value = "compare")]
    pub out: String,
}

pub fn run(args: Args, out: &mut dyn Write) -> CliResult<()> {
    if args.files.len() < 2 {
        return Err(CliError::Usage("compare needs at least two space files".into()));
    }
    let mut frontiers: BTreeMap<String, Vec<TradeoffPoint>> = BTreeMap::new();
    let mut first = None;
    for f in &args.files {
        let space = io::read_space(f)?;
        let id = space.framework_id().to_string();
        first.get_or_insert_with(|| id.clone());
        if frontiers
            .insert(id.clone(), pareto_extract(&space)?.tradeoffs())
            .is_some()
        {
            return Err(CliError::Usage(format!("framework `{id}` given twice")));
        }
    }
    let baseline = args.baseline.or(first).expect("at least one file");
    let hulls: BTreeMap<String, Vec<TradeoffPoint>> = frontiers
        .iter()
        .map(|(id, f)| Ok((id.clone(), lower_convex_hull(f)?)))
        .collect::<tradeoff_core::Result<_>>()?;

    let chart = compute_pir(&hulls, &baseline, args.granularity)?;
    let bands = best_framework_bands(&hulls, chart.grid())?;
    let style = ChartStyle {
        title: Some(format!("performance improvement ratio vs {baseline}")),
        ..Default::default()
    };
    let rendered = render_chart(&chart, &bands, &style)?;
    io::write_output(&PathBuf::from(format!("{}.csv", args.out)), &rendered.csv)?;
    io::write_output(&PathBuf::from(format!("{}.svg", args.out)), &rendered.svg)?;

    let grid = chart.grid();
    writeln!(
        out,
        "comparison range: [{}, {}]  baseline: {baseline}{}",
        format_sig6(grid[0]),
        format_sig6(grid[grid.len() - 1]),
        if chart.degenerate {
            "  (all frameworks equal)"
        } else {
            ""
        }
    )
    .map_err(out_err)?;
    writeln!(out, "fastest framework by accuracy loss:").map_err(out_err)?;
    for b in &bands.bands {
        writeln!(
            out,
            "  [{}, {}] {}",
            format_sig6(b.start),
            format_sig6(b.end),
            b.framework_id
        )
        .map_err(out_err)?;
    }

    writeln!(out, "difference of coverage DOC(row, column):").map_err(out_err)?;
    let ids: Vec<&String> = frontiers.keys().collect();
    let width = ids.iter().map(|s| s.len()).max().unwrap_or(0).max(9);
    write!(out, "{:width$}", "").map_err(out_err)?;
    for id in &ids {
        write!(out, " {id:>width$}").map_err(out_err)?;
    }
    writeln!(out).map_err(out_err)?;
    for x in &ids {
        write!(out, "{x:width$}").map_err(out_err)?;
        for y in &ids {
            let doc = difference_of_coverage(&frontiers[*x], &frontiers[*y])?;
            write!(out, " {:>width$}", format_sig6(doc)).map_err(out_err)?;
        }
        writeln!(out).map_err(out_err)?;
    }
    Ok(())
}
