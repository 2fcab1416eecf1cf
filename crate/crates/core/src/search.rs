//! Shared evaluation machinery for every search strategy: the evaluator
//! interface, per-input aggregation, batched (optionally parallel)
//! evaluation, search outcomes and the JSON report schema.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combined::CombinedConfiguration;
use crate::error::{Error, Result};
use crate::pareto::FrontierCurve;
use crate::space::{Record, TradeoffPoint};

/// Measures a combined configuration on one input.
///
/// Implementations must be deterministic: the same `(config, input_id)`
/// always yields the same trade-off.
pub trait Evaluator: Sync {
    fn evaluate(&self, config: &CombinedConfiguration, input_id: &str) -> Result<TradeoffPoint>;

    /// Whether `evaluate` may be called from several threads at once.
    fn concurrent_safe(&self) -> bool {
        true
    }
}

impl<E: Evaluator + ?Sized> Evaluator for &E {
    fn evaluate(&self, config: &CombinedConfiguration, input_id: &str) -> Result<TradeoffPoint> {
        (**self).evaluate(config, input_id)
    }

    fn concurrent_safe(&self) -> bool {
        (**self).concurrent_safe()
    }
}

/// How per-input trade-offs collapse into one point per configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Median,
    Mean,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

impl Aggregation {
    pub fn aggregate(&self, points: &[TradeoffPoint]) -> Result<TradeoffPoint> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut acc: Vec<f64> = points.iter().map(TradeoffPoint::accuracy_loss).collect();
        let mut rt: Vec<f64> = points.iter().map(TradeoffPoint::runtime).collect();
        match self {
            Aggregation::Median => TradeoffPoint::new(median(&mut acc), median(&mut rt)),
            Aggregation::Mean => {
                let n = points.len() as f64;
                TradeoffPoint::new(acc.iter().sum::<f64>() / n, rt.iter().sum::<f64>() / n)
            }
        }
    }
}

/// One trade-off measured on a named input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputTradeoff {
    pub input_id: String,
    pub accuracy_loss: f64,
    pub runtime: f64,
}

/// A combined configuration with its aggregate and per-input trade-offs.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub config: CombinedConfiguration,
    pub aggregate: TradeoffPoint,
    pub per_input: Vec<(String, TradeoffPoint)>,
}

pub fn evaluate_one<E: Evaluator + ?Sized>(
    evaluator: &E,
    config: &CombinedConfiguration,
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<Evaluated> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let per_input = inputs
        .iter()
        .map(|id| Ok((id.clone(), evaluator.evaluate(config, id)?)))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<TradeoffPoint> = per_input.iter().map(|(_, p)| *p).collect();
    Ok(Evaluated {
        config: config.clone(),
        aggregate: aggregation.aggregate(&points)?,
        per_input,
    })
}

/// Evaluates a batch, in parallel when the evaluator allows it. Results keep
/// the batch order and the first failing configuration (in batch order) is
/// the one reported, so the outcome never depends on scheduling.
pub fn evaluate_batch<E: Evaluator + ?Sized>(
    evaluator: &E,
    configs: &[CombinedConfiguration],
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<Vec<Evaluated>> {
    let results: Vec<Result<Evaluated>> = if evaluator.concurrent_safe() {
        configs
            .par_iter()
            .map(|c| evaluate_one(evaluator, c, inputs, aggregation))
            .collect()
    } else {
        configs
            .iter()
            .map(|c| evaluate_one(evaluator, c, inputs, aggregation))
            .collect()
    };
    results.into_iter().collect()
}

/// Evaluates a (possibly huge) configuration stream chunk by chunk.
pub fn evaluate_stream<E: Evaluator + ?Sized>(
    evaluator: &E,
    stream: impl Iterator<Item = CombinedConfiguration>,
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<Vec<Evaluated>> {
    const CHUNK: usize = 1024;
    let mut out = Vec::new();
    let mut stream = stream.peekable();
    while stream.peek().is_some() {
        let chunk: Vec<CombinedConfiguration> = stream.by_ref().take(CHUNK).collect();
        out.extend(evaluate_batch(evaluator, &chunk, inputs, aggregation)?);
    }
    Ok(out)
}

/// Exploration accounting for one search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchAudit {
    pub candidates_per_framework: BTreeMap<String, u64>,
    pub combined_explored: u64,
    pub evaluations_performed: u64,
    pub seed: u64,
}

/// Strategy-specific parameters echoed into reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchParameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_rate: Option<f64>,
}

/// Pareto-efficient combined configurations found by a search, with the
/// full evaluation log.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub strategy: String,
    pub parameters: SearchParameters,
    pub aggregation: Aggregation,
    pub inputs: Vec<String>,
    pub frontier: FrontierCurve<CombinedConfiguration>,
    pub audit: SearchAudit,
    pub evaluated: Vec<Evaluated>,
}

impl SearchOutcome {
    pub(crate) fn assemble(
        strategy: impl Into<String>,
        parameters: SearchParameters,
        aggregation: Aggregation,
        inputs: &[String],
        evaluated: Vec<Evaluated>,
        audit: SearchAudit,
    ) -> Result<Self> {
        let records: Vec<Record<CombinedConfiguration>> = evaluated
            .iter()
            .map(|e| Record::new(e.config.clone(), e.aggregate))
            .collect();
        let frontier = FrontierCurve::from_records(&records)?;
        Ok(Self {
            strategy: strategy.into(),
            parameters,
            aggregation,
            inputs: inputs.to_vec(),
            frontier,
            audit,
            evaluated,
        })
    }

    /// Log entries of the frontier configurations, in frontier order.
    pub fn frontier_entries(&self) -> Vec<&Evaluated> {
        let index: BTreeMap<&CombinedConfiguration, &Evaluated> =
            self.evaluated.iter().map(|e| (&e.config, e)).collect();
        self.frontier.configs().map(|c| index[c]).collect()
    }

    pub fn report(&self) -> SearchReport {
        SearchReport {
            strategy: self.strategy.clone(),
            parameters: self.parameters.clone(),
            aggregation: self.aggregation,
            inputs: self.inputs.clone(),
            audit: self.audit.clone(),
            frontier: self
                .frontier_entries()
                .into_iter()
                .map(|e| FrontierEntry {
                    configuration: e.config.clone(),
                    accuracy_loss: e.aggregate.accuracy_loss(),
                    runtime: e.aggregate.runtime(),
                    per_input: e
                        .per_input
                        .iter()
                        .map(|(id, p)| InputTradeoff {
                            input_id: id.clone(),
                            accuracy_loss: p.accuracy_loss(),
                            runtime: p.runtime(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierEntry {
    pub configuration: CombinedConfiguration,
    pub accuracy_loss: f64,
    pub runtime: f64,
    pub per_input: Vec<InputTradeoff>,
}

/// Serialized form of a [`SearchOutcome`]; shared by every strategy, with
/// `strategy` telling them apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub strategy: String,
    pub parameters: SearchParameters,
    pub aggregation: Aggregation,
    pub inputs: Vec<String>,
    pub audit: SearchAudit,
    pub frontier: Vec<FrontierEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, r: f64) -> TradeoffPoint {
        TradeoffPoint::new(a, r).unwrap()
    }

    #[test]
    fn median_and_mean() {
        let pts = [pt(0.3, 3.0), pt(0.1, 1.0), pt(0.2, 5.0)];
        assert_eq!(Aggregation::Median.aggregate(&pts).unwrap(), pt(0.2, 3.0));
        let even = [pt(0.1, 1.0), pt(0.3, 3.0)];
        let m = Aggregation::Median.aggregate(&even).unwrap();
        assert!((m.accuracy_loss() - 0.2).abs() < 1e-15 && m.runtime() == 2.0);
        assert_eq!(Aggregation::Mean.aggregate(&pts).unwrap().runtime(), 3.0);
        assert_eq!(Aggregation::Median.aggregate(&[]), Err(Error::EmptyInput));
    }
}
