//! Combined configurations and lazy cross-product enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Configuration;

/// Framework id -> knob name -> level index.
pub type Assignments = BTreeMap<String, BTreeMap<String, usize>>;

/// One configuration per participating framework.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Assignments", into = "Assignments")]
pub struct CombinedConfiguration {
    parts: BTreeMap<String, Configuration>,
}

impl CombinedConfiguration {
    pub fn new(parts: impl IntoIterator<Item = Configuration>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in parts {
            let id = part.framework_id.clone();
            if map.insert(id.clone(), part).is_some() {
                return Err(Error::InvalidConfiguration {
                    framework: id,
                    reason: "framework appears twice in a combined configuration".into(),
                });
            }
        }
        Ok(Self { parts: map })
    }

    pub fn parts(&self) -> &BTreeMap<String, Configuration> {
        &self.parts
    }

    pub fn part(&self, framework_id: &str) -> Option<&Configuration> {
        self.parts.get(framework_id)
    }

    pub fn assignments(&self) -> Assignments {
        self.parts
            .iter()
            .map(|(id, c)| (id.clone(), c.assignment.clone()))
            .collect()
    }
}

impl From<Assignments> for CombinedConfiguration {
    fn from(assignments: Assignments) -> Self {
        let parts = assignments
            .into_iter()
            .map(|(id, assignment)| {
                (
                    id.clone(),
                    Configuration {
                        framework_id: id,
                        assignment,
                    },
                )
            })
            .collect();
        Self { parts }
    }
}

impl From<CombinedConfiguration> for Assignments {
    fn from(c: CombinedConfiguration) -> Self {
        c.assignments()
    }
}

impl fmt::Display for CombinedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.values().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

/// Lazy cartesian product over per-framework candidate lists.
///
/// Yields combinations in lexicographic order: frameworks by id, and the last
/// framework's candidate varies fastest.
#[derive(Debug, Clone)]
pub struct CrossProduct {
    axes: Vec<Vec<Configuration>>,
    cursor: Vec<usize>,
    remaining: u128,
    size: u128,
}

impl CrossProduct {
    /// Total number of combinations, independent of iteration progress.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn remaining(&self) -> u128 {
        self.remaining
    }
}

impl Iterator for CrossProduct {
    type Item = CombinedConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let parts = self
            .axes
            .iter()
            .zip(&self.cursor)
            .map(|(axis, &i)| (axis[i].framework_id.clone(), axis[i].clone()))
            .collect();
        self.remaining -= 1;
        for k in (0..self.axes.len()).rev() {
            self.cursor[k] += 1;
            if self.cursor[k] < self.axes[k].len() {
                break;
            }
            self.cursor[k] = 0;
        }
        Some(CombinedConfiguration { parts })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.remaining) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

/// Cross product of per-framework candidate sets.
pub fn combine(candidate_sets: &BTreeMap<String, BTreeSet<Configuration>>) -> Result<CrossProduct> {
    if candidate_sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut size: u128 = 1;
    let mut axes = Vec::with_capacity(candidate_sets.len());
    for (id, set) in candidate_sets {
        if set.is_empty() {
            return Err(Error::EmptyCandidates(id.clone()));
        }
        if let Some(stray) = set.iter().find(|c| &c.framework_id != id) {
            return Err(Error::InvalidConfiguration {
                framework: id.clone(),
                reason: format!("candidate {stray} belongs to another framework"),
            });
        }
        size = size.checked_mul(set.len() as u128).ok_or(Error::SpaceOverflow)?;
        axes.push(set.iter().cloned().collect::<Vec<_>>());
    }
    Ok(CrossProduct {
        cursor: vec![0; axes.len()],
        axes,
        remaining: size,
        size,
    })
}
