//! BOA combined-space search.
//!
//! Each framework contributes a candidate set built from its own trade-off
//! space; the combined space searched is the cross product of those sets.
//!
//! * simple: exactly the framework's Pareto-optimal configurations;
//! * flex: additionally every configuration within a normalized Euclidean
//!   distance `threshold` of some Pareto-optimal trade-off;
//! * prob: Pareto-optimal configurations always, other configurations with
//!   a probability that decays sigmoidally with their distance to the
//!   nearest Pareto-optimal trade-off.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combined::combine;
use crate::error::{Error, Result};
use crate::pareto::{distance_to_nearest, normalization_bounds, pareto_extract};
use crate::search::{evaluate_stream, Aggregation, Evaluator, SearchAudit, SearchOutcome, SearchParameters};
use crate::space::{Configuration, TradeoffPoint, TradeoffSpace};

/// Decreasing logistic inclusion schedule `1 / (1 + exp((delta - beta) / gamma))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidParams {
    beta: f64,
    gamma: f64,
}

impl SigmoidParams {
    /// 92% inclusion at distance 0.05, 50% at 0.1, under 1% at 0.2.
    pub const DEFAULT_BETA: f64 = 0.1;
    pub const DEFAULT_GAMMA: f64 = 0.02;

    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !beta.is_finite() || !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidSigmoid { beta, gamma });
        }
        Ok(Self { beta, gamma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn probability(&self, delta: f64) -> f64 {
        1.0 / (1.0 + ((delta - self.beta) / self.gamma).exp())
    }
}

impl Default for SigmoidParams {
    fn default() -> Self {
        Self {
            beta: Self::DEFAULT_BETA,
            gamma: Self::DEFAULT_GAMMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BoaMode {
    Simple,
    Flex { threshold: f64 },
    Prob { params: SigmoidParams, seed: u64 },
}

impl BoaMode {
    pub fn name(&self) -> &'static str {
        match self {
            BoaMode::Simple => "boa-simple",
            BoaMode::Flex { .. } => "boa-flex",
            BoaMode::Prob { .. } => "boa-prob",
        }
    }

    fn parameters(&self) -> SearchParameters {
        match *self {
            BoaMode::Simple => SearchParameters::default(),
            BoaMode::Flex { threshold } => SearchParameters {
                threshold: Some(threshold),
                ..Default::default()
            },
            BoaMode::Prob { params, seed } => SearchParameters {
                beta: Some(params.beta),
                gamma: Some(params.gamma),
                seed: Some(seed),
                ..Default::default()
            },
        }
    }

    fn seed(&self) -> u64 {
        match self {
            BoaMode::Prob { seed, .. } => *seed,
            _ => 0,
        }
    }
}

/// Every record of `space` with its distance to the nearest Pareto-optimal
/// trade-off and whether it is itself on the frontier.
fn classify(space: &TradeoffSpace) -> Result<Vec<(&Configuration, f64, bool)>> {
    let frontier = pareto_extract(space)?;
    let on_frontier: BTreeSet<&Configuration> = frontier.configs().collect();
    let targets: Vec<TradeoffPoint> = frontier.tradeoffs();
    let bounds = normalization_bounds(space)?;
    Ok(space
        .records()
        .iter()
        .map(|r| {
            let delta = distance_to_nearest(&r.point, &targets, &bounds);
            (&r.config, delta, on_frontier.contains(&r.config))
        })
        .collect())
}

/// The configurations on the space's Pareto frontier.
pub fn simple_candidates(space: &TradeoffSpace) -> Result<BTreeSet<Configuration>> {
    Ok(pareto_extract(space)?.configs().cloned().collect())
}

/// Pareto-optimal configurations plus those within `threshold` (normalized
/// Euclidean distance over this space's bounds) of the nearest one.
///
/// A zero threshold selects exactly the Pareto-optimal configurations, so
/// configurations that merely duplicate a frontier trade-off join only once
/// the threshold is positive.
pub fn flex_candidates(space: &TradeoffSpace, threshold: f64) -> Result<BTreeSet<Configuration>> {
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::NegativeThreshold(threshold));
    }
    Ok(classify(space)?
        .into_iter()
        .filter(|&(_, delta, pareto)| pareto || (threshold > 0.0 && delta <= threshold))
        .map(|(c, _, _)| c.clone())
        .collect())
}

/// Pareto-optimal configurations and any configuration at distance zero
/// from the frontier, plus a random selection of the rest, each kept
/// independently with probability `params.probability(delta)`.
///
/// One uniform draw is consumed per remaining record, in record order.
pub fn prob_candidates<R: Rng + ?Sized>(
    space: &TradeoffSpace,
    params: &SigmoidParams,
    rng: &mut R,
) -> Result<BTreeSet<Configuration>> {
    let mut selected = BTreeSet::new();
    for (config, delta, pareto) in classify(space)? {
        if pareto || delta == 0.0 || rng.gen::<f64>() < params.probability(delta) {
            selected.insert(config.clone());
        }
    }
    Ok(selected)
}

fn check_unique_ids(spaces: &[TradeoffSpace]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for s in spaces {
        if !seen.insert(s.framework_id()) {
            return Err(Error::InvalidParams(format!(
                "framework `{}` supplied twice",
                s.framework_id()
            )));
        }
    }
    if spaces.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Per-framework candidate sets for `mode`. Prob mode draws from a single
/// generator seeded once and walked through `spaces` in the given order.
pub fn candidate_sets(spaces: &[TradeoffSpace], mode: &BoaMode) -> Result<BTreeMap<String, BTreeSet<Configuration>>> {
    check_unique_ids(spaces)?;
    let mut rng = match mode {
        BoaMode::Prob { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    spaces
        .iter()
        .map(|space| {
            let set = match mode {
                BoaMode::Simple => simple_candidates(space)?,
                BoaMode::Flex { threshold } => flex_candidates(space, *threshold)?,
                BoaMode::Prob { params, .. } => prob_candidates(space, params, rng.as_mut().expect("prob rng"))?,
            };
            Ok((space.framework_id().to_string(), set))
        })
        .collect()
}

/// Builds candidate sets, evaluates their whole cross product on `inputs`
/// and returns the Pareto-efficient combined configurations.
pub fn boa_search<E: Evaluator + ?Sized>(
    spaces: &[TradeoffSpace],
    mode: &BoaMode,
    evaluator: &E,
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<SearchOutcome> {
    if let BoaMode::Prob { params, .. } = mode {
        SigmoidParams::new(params.beta, params.gamma)?;
    }
    let sets = candidate_sets(spaces, mode)?;
    let product = combine(&sets)?;
    let combined_explored = u64::try_from(product.size()).map_err(|_| Error::SpaceOverflow)?;
    let evaluated = evaluate_stream(evaluator, product, inputs, aggregation)?;
    let audit = SearchAudit {
        candidates_per_framework: sets.iter().map(|(id, s)| (id.clone(), s.len() as u64)).collect(),
        combined_explored,
        evaluations_performed: evaluated.len() as u64,
        seed: mode.seed(),
    };
    SearchOutcome::assemble(mode.name(), mode.parameters(), aggregation, inputs, evaluated, audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Knob, Record};
    use approx::assert_abs_diff_eq;

    fn space(id: &str, points: &[(f64, f64)]) -> TradeoffSpace {
        let knobs = vec![Knob::indexed("k", points.len(), 0).unwrap()];
        let records = points
            .iter()
            .enumerate()
            .map(|(i, &(a, r))| Record::new(Configuration::new(id, [("k", i)]), TradeoffPoint::new(a, r).unwrap()))
            .collect();
        TradeoffSpace::new(id, knobs.clone(), records, Configuration::defaults(id, &knobs)).unwrap()
    }

    fn ks(id: &str, idx: &[usize]) -> BTreeSet<Configuration> {
        idx.iter().map(|&i| Configuration::new(id, [("k", i)])).collect()
    }

    #[test]
    fn sigmoid_schedule() {
        let s = SigmoidParams::default();
        assert_abs_diff_eq!(s.probability(0.1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.probability(0.05), 1.0 / (1.0 + (-2.5f64).exp()), epsilon = 1e-15);
        assert_abs_diff_eq!(s.probability(0.05), 0.92414, epsilon = 1e-5);
        assert_abs_diff_eq!(s.probability(0.2), 0.00669, epsilon = 1e-5);
        assert!(SigmoidParams::new(0.1, 0.0).is_err());
        assert!(SigmoidParams::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn flex_threshold_examples() {
        // frontier (0, 1) and (1, 0.5); (0.05, 1.0) sits 0.05 from (0, 1)
        let s = space("f", &[(0.0, 1.0), (0.05, 1.0), (1.0, 0.5)]);
        assert_eq!(flex_candidates(&s, 0.0).unwrap(), simple_candidates(&s).unwrap());
        assert_eq!(flex_candidates(&s, 0.05).unwrap(), ks("f", &[0, 1, 2]));
        assert_eq!(flex_candidates(&s, 0.049).unwrap(), ks("f", &[0, 2]));
        assert_eq!(flex_candidates(&s, std::f64::consts::SQRT_2).unwrap().len(), 3);
        assert!(matches!(flex_candidates(&s, -0.1), Err(Error::NegativeThreshold(_))));
    }

    #[test]
    fn flex_zero_ignores_duplicate_tradeoffs() {
        let s = space("f", &[(0.0, 1.0), (0.5, 0.5), (0.5, 0.5)]);
        assert_eq!(flex_candidates(&s, 0.0).unwrap(), ks("f", &[0, 1]));
        assert_eq!(flex_candidates(&s, 1e-9).unwrap(), ks("f", &[0, 1, 2]));
    }

    #[test]
    fn prob_always_keeps_frontier() {
        let s = space("f", &[(0.0, 1.0), (0.9, 0.95), (1.0, 0.5)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let set = prob_candidates(&s, &SigmoidParams::default(), &mut rng).unwrap();
            assert!(set.is_superset(&ks("f", &[0, 2])));
        }
        // a duplicate of a frontier trade-off is at distance zero
        let s = space("f", &[(0.0, 1.0), (1.0, 0.5), (1.0, 0.5)]);
        for _ in 0..200 {
            assert_eq!(
                prob_candidates(&s, &SigmoidParams::default(), &mut rng).unwrap(),
                ks("f", &[0, 1, 2])
            );
        }
    }

    #[test]
    fn candidate_sets_are_seed_deterministic() {
        let spaces = vec![
            space("a", &[(0.0, 1.0), (0.02, 0.99), (0.1, 0.95), (1.0, 0.5)]),
            space("b", &[(0.0, 2.0), (0.2, 1.9), (0.5, 1.0)]),
        ];
        let mode = BoaMode::Prob {
            params: SigmoidParams::default(),
            seed: 11,
        };
        assert_eq!(
            candidate_sets(&spaces, &mode).unwrap(),
            candidate_sets(&spaces, &mode).unwrap()
        );
        let dup = vec![spaces[0].clone(), spaces[0].clone()];
        assert!(candidate_sets(&dup, &BoaMode::Simple).is_err());
    }
}
