//! Evaluators, the synthetic benchmark and the train/test study.

mod synthetic;
mod table;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use synthetic::{
    exhaustive_oracle, synth_generate, Interaction, KnobEffects, KnobLevel, SynthSpec, SyntheticBenchmark,
    SyntheticFramework, DEFAULT_ORACLE_CAP,
};
pub use table::TableEvaluator;

use crate::combined::CombinedConfiguration;
use crate::error::{Error, Result};
use crate::metrics::{linear_fit_correlation, FitReport};
use crate::pareto::FrontierCurve;
use crate::search::{evaluate_one, Aggregation, Evaluator};

/// Disjoint, non-empty training and test input ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSet {
    pub training: Vec<String>,
    pub test: Vec<String>,
}

impl InputSet {
    pub fn new(training: Vec<String>, test: Vec<String>) -> Result<Self> {
        if training.is_empty() || test.is_empty() {
            return Err(Error::InvalidParams(
                "training and test inputs must both be non-empty".into(),
            ));
        }
        let train: BTreeSet<&String> = training.iter().collect();
        if let Some(shared) = test.iter().find(|t| train.contains(t)) {
            return Err(Error::InvalidParams(format!(
                "input `{shared}` is in both training and test sets"
            )));
        }
        Ok(Self { training, test })
    }

    pub fn all(&self) -> Vec<String> {
        self.training.iter().chain(&self.test).cloned().collect()
    }
}

/// Per-configuration training vs. test trade-offs and the fits over them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub accuracy_loss: FitReport,
    pub runtime: FitReport,
    /// `(training, test)` accuracy loss per frontier configuration.
    pub accuracy_pairs: Vec<(f64, f64)>,
    /// `(training, test)` runtime per frontier configuration, relative to the
    /// reference configuration on the same subset when one is given.
    pub runtime_pairs: Vec<(f64, f64)>,
}

/// Re-measures each frontier configuration on the training and test inputs
/// (median over each subset) and fits test against training.
pub fn train_test_study<E: Evaluator + ?Sized>(
    frontier: &FrontierCurve<CombinedConfiguration>,
    evaluator: &E,
    inputs: &InputSet,
    reference: Option<&CombinedConfiguration>,
) -> Result<StudyReport> {
    if frontier.len() < 2 {
        return Err(Error::DegenerateStudy(format!(
            "frontier has {} configuration(s); at least two are needed",
            frontier.len()
        )));
    }
    let measure = |c: &CombinedConfiguration, ids: &[String]| {
        evaluate_one(evaluator, c, ids, Aggregation::Median).map(|e| e.aggregate)
    };
    let (scale_train, scale_test) = match reference {
        Some(r) => (
            measure(r, &inputs.training)?.runtime(),
            measure(r, &inputs.test)?.runtime(),
        ),
        None => (1.0, 1.0),
    };
    let mut accuracy_pairs = Vec::with_capacity(frontier.len());
    let mut runtime_pairs = Vec::with_capacity(frontier.len());
    for c in frontier.configs() {
        let train = measure(c, &inputs.training)?;
        let test = measure(c, &inputs.test)?;
        accuracy_pairs.push((train.accuracy_loss(), test.accuracy_loss()));
        runtime_pairs.push((train.runtime() / scale_train, test.runtime() / scale_test));
    }
    let fit = |pairs: &[(f64, f64)]| {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        linear_fit_correlation(&x, &y)
    };
    Ok(StudyReport {
        accuracy_loss: fit(&accuracy_pairs)?,
        runtime: fit(&runtime_pairs)?,
        accuracy_pairs,
        runtime_pairs,
    })
}
