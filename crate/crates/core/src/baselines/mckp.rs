use std::collections::{BTreeMap, BTreeSet};

use crate::combined::CombinedConfiguration;
use crate::error::{Error, Result};
use crate::pareto::pareto_extract;
use crate::search::{evaluate_batch, Aggregation, Evaluator, SearchAudit, SearchOutcome, SearchParameters};
use crate::space::TradeoffSpace;

/// Each framework's Pareto-optimal configurations with every other framework
/// held at its default, plus the all-defaults configuration.
pub fn mckp_candidates(spaces: &[TradeoffSpace]) -> Result<BTreeSet<CombinedConfiguration>> {
    if spaces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let defaults: Vec<_> = spaces.iter().map(|s| s.default_config().clone()).collect();
    let mut out = BTreeSet::new();
    out.insert(CombinedConfiguration::new(defaults.iter().cloned())?);
    for (i, space) in spaces.iter().enumerate() {
        for config in pareto_extract(space)?.configs() {
            let mut parts = defaults.clone();
            parts[i] = config.clone();
            out.insert(CombinedConfiguration::new(parts)?);
        }
    }
    Ok(out)
}

/// Brute-force evaluation of the MCKP candidate set.
pub fn mckp_search<E: Evaluator + ?Sized>(
    spaces: &[TradeoffSpace],
    evaluator: &E,
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<SearchOutcome> {
    let candidates: Vec<CombinedConfiguration> = mckp_candidates(spaces)?.into_iter().collect();
    let mut per_framework: BTreeMap<String, BTreeSet<_>> = BTreeMap::new();
    for c in &candidates {
        for (id, part) in c.parts() {
            per_framework.entry(id.clone()).or_default().insert(part);
        }
    }
    let evaluated = evaluate_batch(evaluator, &candidates, inputs, aggregation)?;
    let audit = SearchAudit {
        candidates_per_framework: per_framework
            .iter()
            .map(|(id, s)| (id.clone(), s.len() as u64))
            .collect(),
        combined_explored: candidates.len() as u64,
        evaluations_performed: evaluated.len() as u64,
        seed: 0,
    };
    SearchOutcome::assemble(
        "mckp",
        SearchParameters::default(),
        aggregation,
        inputs,
        evaluated,
        audit,
    )
}
