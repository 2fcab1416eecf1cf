//! The `tradeoff` command-line tool.

pub mod commands;
pub mod error;
pub mod io;
pub mod study;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "tradeoff",
    version,
    about = "Compare approximation frameworks and search their combined configuration space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Pareto frontier of a space file.
    Pareto(commands::pareto::Args),
    /// Chart performance-improvement ratios and coverage across frameworks.
    Compare(commands::compare::Args),
    /// Search the combined space seeded by each framework's frontier.
    Combine(commands::combine::Args),
    /// Run a baseline search (MCKP or NSGA-II).
    Baseline(commands::baseline::Args),
    /// Run every strategy over a synthetic benchmark suite.
    Study(commands::study::Args),
    /// Write space files and a measured-data table from a synthetic spec.
    Generate(commands::generate::Args),
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Pareto(args) => commands::pareto::run(args, out),
        Command::Compare(args) => commands::compare::run(args, out),
        Command::Combine(args) => commands::combine::run(args, out),
        Command::Baseline(args) => commands::baseline::run(args, out),
        Command::Study(args) => commands::study::run(args, out),
        Command::Generate(args) => commands::generate::run(args, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // --help and --version are not failures
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return 1;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
