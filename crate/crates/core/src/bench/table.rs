use std::collections::HashMap;

use crate::combined::CombinedConfiguration;
use crate::error::{Error, Result};
use crate::search::Evaluator;
use crate::space::TradeoffPoint;

/// Evaluator backed by measured `(configuration, input) -> trade-off` rows.
#[derive(Debug, Clone, Default)]
pub struct TableEvaluator {
    rows: HashMap<(CombinedConfiguration, String), TradeoffPoint>,
}

impl TableEvaluator {
    /// Loads rows; an exact repeat of a row is accepted, a repeat with a
    /// different trade-off is an error.
    pub fn new(records: impl IntoIterator<Item = (CombinedConfiguration, String, TradeoffPoint)>) -> Result<Self> {
        let mut rows = HashMap::new();
        for (config, input, point) in records {
            match rows.get(&(config.clone(), input.clone())) {
                Some(existing) if *existing != point => {
                    return Err(Error::ConflictingRecord {
                        configuration: config.to_string(),
                        input,
                    })
                }
                Some(_) => {}
                None => {
                    rows.insert((config, input), point);
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct input ids, sorted.
    pub fn input_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.rows.keys().map(|(_, i)| i.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }
}

impl Evaluator for TableEvaluator {
    fn evaluate(&self, config: &CombinedConfiguration, input_id: &str) -> Result<TradeoffPoint> {
        // HashMap lookup needs an owned key; tables are small relative to the
        // cost of the surrounding search.
        self.rows
            .get(&(config.clone(), input_id.to_string()))
            .copied()
            .ok_or_else(|| Error::EvaluatorMiss {
                configuration: config.to_string(),
                input: input_id.to_string(),
            })
    }
}
