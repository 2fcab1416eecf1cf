//! Multi-strategy studies over synthetic benchmarks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tradeoff_core::baselines::{mckp_search, nsga2_search, Nsga2Params};
use tradeoff_core::bench::{exhaustive_oracle, synth_generate, train_test_study, SynthSpec, DEFAULT_ORACLE_CAP};
use tradeoff_core::boa::{boa_search, BoaMode, SigmoidParams};
use tradeoff_core::metrics::{arithmetic_mean, difference_of_coverage};
use tradeoff_core::viper::format_sig6;
use tradeoff_core::{Aggregation, SearchOutcome};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyStrategy {
    BoaSimple,
    BoaFlex,
    BoaProb,
    Mckp,
    Nsga2,
    Oracle,
}

impl StudyStrategy {
    pub fn name(self) -> &'static str {
        match self {
            StudyStrategy::BoaSimple => "boa-simple",
            StudyStrategy::BoaFlex => "boa-flex",
            StudyStrategy::BoaProb => "boa-prob",
            StudyStrategy::Mckp => "mckp",
            StudyStrategy::Nsga2 => "nsga2",
            StudyStrategy::Oracle => "oracle",
        }
    }

    fn is_boa(self) -> bool {
        matches!(
            self,
            StudyStrategy::BoaSimple | StudyStrategy::BoaFlex | StudyStrategy::BoaProb
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StudyOptions {
    pub threshold: f64,
    pub sigmoid: SigmoidParams,
    pub oracle_cap: u128,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            threshold: 0.05,
            sigmoid: SigmoidParams::default(),
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

/// Either one spec or a named suite of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StudyInput {
    Suite(BTreeMap<String, SynthSpec>),
    Single(SynthSpec),
}

impl StudyInput {
    pub fn into_apps(self) -> BTreeMap<String, SynthSpec> {
        match self {
            StudyInput::Suite(apps) => apps,
            StudyInput::Single(spec) => BTreeMap::from([("app".to_string(), spec)]),
        }
    }
}

/// Five application-shaped benchmarks with mild interactions and noise.
pub fn desk_suite() -> BTreeMap<String, SynthSpec> {
    let app = |frameworks, knobs_per_framework, levels_per_knob, seed| SynthSpec {
        frameworks,
        knobs_per_framework,
        levels_per_knob,
        interaction_density: 0.3,
        noise_scale: 0.01,
        train_inputs: 3,
        test_inputs: 3,
        base_runtime: 10.0,
        seed,
    };
    BTreeMap::from([
        ("app-a".to_string(), app(2, 2, 4, 101)),
        ("app-b".to_string(), app(3, 2, 3, 202)),
        ("app-c".to_string(), app(2, 3, 3, 303)),
        ("app-d".to_string(), app(3, 1, 6, 404)),
        ("app-e".to_string(), app(2, 2, 6, 505)),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub app: String,
    pub seed: u64,
    pub strategy: StudyStrategy,
    pub frontier_size: usize,
    pub combined_explored: u64,
    pub evaluations: u64,
    pub doc_vs_nsga2: Option<f64>,
    pub doc_vs_oracle: Option<f64>,
    pub r_accuracy: Option<f64>,
    pub r_runtime: Option<f64>,
}

/// Runs `strategies` on one benchmark. The spec's own seed is offset by
/// `seed`; NSGA-II gets the largest evaluation count of the BOA strategies
/// run alongside it as its budget.
pub fn run_app(
    app: &str,
    spec: &SynthSpec,
    seed: u64,
    strategies: &[StudyStrategy],
    options: &StudyOptions,
) -> CliResult<Vec<StudyRow>> {
    let spec = SynthSpec {
        seed: spec.seed.wrapping_add(seed),
        ..spec.clone()
    };
    let bench = synth_generate(&spec)?;
    let inputs = bench.inputs().training.clone();
    let spaces = bench.training_spaces()?;
    let agg = Aggregation::Median;

    let mut order: Vec<StudyStrategy> = strategies.to_vec();
    order.sort();
    order.dedup();
    let mut outcomes: BTreeMap<StudyStrategy, SearchOutcome> = BTreeMap::new();
    for &s in order.iter().filter(|s| s.is_boa()) {
        let mode = match s {
            StudyStrategy::BoaSimple => BoaMode::Simple,
            StudyStrategy::BoaFlex => BoaMode::Flex {
                threshold: options.threshold,
            },
            _ => BoaMode::Prob {
                params: options.sigmoid,
                seed,
            },
        };
        outcomes.insert(s, boa_search(&spaces, &mode, &bench, &inputs, agg)?);
    }
    if order.contains(&StudyStrategy::Mckp) {
        outcomes.insert(StudyStrategy::Mckp, mckp_search(&spaces, &bench, &inputs, agg)?);
    }
    if order.contains(&StudyStrategy::Nsga2) {
        let budget = outcomes
            .iter()
            .filter(|(s, _)| s.is_boa())
            .map(|(_, o)| o.audit.evaluations_performed as usize)
            .max();
        let params = match budget {
            Some(b) => Nsga2Params::for_budget(b, seed),
            None => Nsga2Params {
                seed,
                ..Default::default()
            },
        };
        outcomes.insert(
            StudyStrategy::Nsga2,
            nsga2_search(&spaces, params, &bench, &inputs, agg)?,
        );
    }
    if order.contains(&StudyStrategy::Oracle) {
        outcomes.insert(
            StudyStrategy::Oracle,
            exhaustive_oracle(&bench, &inputs, options.oracle_cap)?,
        );
    }

    let frontier_of = |s: StudyStrategy| outcomes.get(&s).map(|o| o.frontier.tradeoffs());
    let (nsga, oracle) = (frontier_of(StudyStrategy::Nsga2), frontier_of(StudyStrategy::Oracle));
    let reference = bench.default_config();
    let mut rows = Vec::new();
    for (&strategy, outcome) in &outcomes {
        let front = outcome.frontier.tradeoffs();
        let doc = |other: &Option<Vec<_>>| -> CliResult<Option<f64>> {
            Ok(match other {
                Some(o) => Some(difference_of_coverage(&front, o)?),
                None => None,
            })
        };
        let study = match train_test_study(&outcome.frontier, &bench, bench.inputs(), Some(&reference)) {
            Ok(s) => Some(s),
            Err(e) if e.is_degenerate() => None,
            Err(e) => return Err(e.into()),
        };
        rows.push(StudyRow {
            app: app.to_string(),
            seed,
            strategy,
            frontier_size: outcome.frontier.len(),
            combined_explored: outcome.audit.combined_explored,
            evaluations: outcome.audit.evaluations_performed,
            doc_vs_nsga2: doc(&nsga)?,
            doc_vs_oracle: doc(&oracle)?,
            r_accuracy: study.as_ref().map(|s| s.accuracy_loss.r),
            r_runtime: study.as_ref().map(|s| s.runtime.r),
        });
    }
    Ok(rows)
}

pub fn run_study(
    apps: &BTreeMap<String, SynthSpec>,
    strategies: &[StudyStrategy],
    seeds: &[u64],
    options: &StudyOptions,
) -> CliResult<Vec<StudyRow>> {
    if apps.is_empty() || strategies.is_empty() || seeds.is_empty() {
        return Err(CliError::Usage(
            "study needs at least one app, strategy and seed".into(),
        ));
    }
    let mut rows = Vec::new();
    for (app, spec) in apps {
        for &seed in seeds {
            rows.extend(run_app(app, spec, seed, strategies, options)?);
        }
    }
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), format_sig6)
}

pub fn rows_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from(
        "app,seed,strategy,frontier_size,combined_explored,evaluations,doc_vs_nsga2,doc_vs_oracle,r_accuracy,r_runtime\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.app,
            r.seed,
            r.strategy.name(),
            r.frontier_size,
            r.combined_explored,
            r.evaluations,
            opt(r.doc_vs_nsga2),
            opt(r.doc_vs_oracle),
            opt(r.r_accuracy),
            opt(r.r_runtime)
        )
        .unwrap();
    }
    out
}

fn mean_of(rows: &[&StudyRow], f: impl Fn(&StudyRow) -> Option<f64>) -> Option<f64> {
    let values: Vec<f64> = rows.iter().filter_map(|r| f(r)).collect();
    arithmetic_mean(&values)
}

pub fn summary_markdown(rows: &[StudyRow]) -> String {
    let mut strategies: Vec<StudyStrategy> = rows.iter().map(|r| r.strategy).collect();
    strategies.sort();
    strategies.dedup();
    let mut apps: Vec<&str> = rows.iter().map(|r| r.app.as_str()).collect();
    apps.sort();
    apps.dedup();

    let mut md = String::from("# Study summary\n\n");
    md.push_str("Means over apps and seeds.\n\n");
    md.push_str("| strategy | runs | frontier size | explored | DOC vs nsga2 | DOC vs nsga2 >= 0 | DOC vs oracle | r (loss) | r (runtime) |\n");
    md.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for s in &strategies {
        let rs: Vec<&StudyRow> = rows.iter().filter(|r| r.strategy == *s).collect();
        let with_doc: Vec<f64> = rs.iter().filter_map(|r| r.doc_vs_nsga2).collect();
        let wins = with_doc.iter().filter(|&&d| d >= 0.0).count();
        writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            s.name(),
            rs.len(),
            opt(mean_of(&rs, |r| Some(r.frontier_size as f64))),
            opt(mean_of(&rs, |r| Some(r.combined_explored as f64))),
            opt(mean_of(&rs, |r| r.doc_vs_nsga2)),
            if with_doc.is_empty() {
                "NA".to_string()
            } else {
                format!("{wins}/{}", with_doc.len())
            },
            opt(mean_of(&rs, |r| r.doc_vs_oracle)),
            opt(mean_of(&rs, |r| r.r_accuracy)),
            opt(mean_of(&rs, |r| r.r_runtime)),
        )
        .unwrap();
    }

    if rows.iter().any(|r| r.doc_vs_nsga2.is_some()) {
        md.push_str("\n## DOC vs nsga2 by app\n\n| app |");
        for s in &strategies {
            write!(md, " {} |", s.name()).unwrap();
        }
        md.push_str("\n|---|");
        md.push_str(&"---|".repeat(strategies.len()));
        md.push('\n');
        for app in &apps {
            write!(md, "| {app} |").unwrap();
            for s in &strategies {
                let rs: Vec<&StudyRow> = rows.iter().filter(|r| r.app == *app && r.strategy == *s).collect();
                write!(md, " {} |", opt(mean_of(&rs, |r| r.doc_vs_nsga2))).unwrap();
            }
            md.push('\n');
        }
    }
    md
}
