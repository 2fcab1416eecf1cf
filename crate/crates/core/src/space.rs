//! Domain types: knobs, configurations, trade-off points and spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tunable parameter of an approximation framework.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Knob {
    name: String,
    levels: Vec<String>,
    default_index: usize,
}

impl Knob {
    pub fn new(
        name: impl Into<String>,
        levels: impl IntoIterator<Item = impl Into<String>>,
        default_index: usize,
    ) -> Result<Self> {
        let name = name.into();
        let levels: Vec<String> = levels.into_iter().map(Into::into).collect();
        let invalid = |reason: &str| Error::InvalidKnob {
            knob: name.clone(),
            reason: reason.to_string(),
        };
        if name.is_empty() {
            return Err(invalid("name is empty"));
        }
        if levels.is_empty() {
            return Err(invalid("no levels"));
        }
        if default_index >= levels.len() {
            return Err(invalid("default index out of range"));
        }
        let unique: BTreeSet<&String> = levels.iter().collect();
        if unique.len() != levels.len() {
            return Err(invalid("duplicate level values"));
        }
        Ok(Self {
            name,
            levels,
            default_index,
        })
    }

    /// A knob whose levels are the tokens `0..count`.
    pub fn indexed(name: impl Into<String>, count: usize, default_index: usize) -> Result<Self> {
        Self::new(name, (0..count).map(|i| i.to_string()), default_index)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn default_index(&self) -> usize {
        self.default_index
    }
}

/// One assignment of level indices to a framework's knobs.
///
/// Ordering is lexicographic over `(framework_id, assignment)`, which is the
/// tie-break key used wherever duplicate trade-offs must be resolved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub framework_id: String,
    pub assignment: BTreeMap<String, usize>,
}

impl Configuration {
    pub fn new(
        framework_id: impl Into<String>,
        assignment: impl IntoIterator<Item = (impl Into<String>, usize)>,
    ) -> Self {
        Self {
            framework_id: framework_id.into(),
            assignment: assignment.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    /// The configuration that puts every knob at its default level.
    pub fn defaults(framework_id: impl Into<String>, knobs: &[Knob]) -> Self {
        Self {
            framework_id: framework_id.into(),
            assignment: knobs.iter().map(|k| (k.name.clone(), k.default_index)).collect(),
        }
    }

    /// Checks that the assignment covers exactly `knobs` with valid indices.
    pub fn validate(&self, knobs: &[Knob]) -> Result<()> {
        let invalid = |reason: String| Error::InvalidConfiguration {
            framework: self.framework_id.clone(),
            reason,
        };
        if self.assignment.len() != knobs.len() {
            return Err(invalid(format!(
                "assigns {} knobs, framework declares {}",
                self.assignment.len(),
                knobs.len()
            )));
        }
        for knob in knobs {
            match self.assignment.get(&knob.name) {
                None => return Err(invalid(format!("knob `{}` unassigned", knob.name))),
                Some(&idx) if idx >= knob.levels.len() => {
                    return Err(invalid(format!(
                        "knob `{}` level {idx} out of range (has {})",
                        knob.name,
                        knob.levels.len()
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.framework_id)?;
        for (i, (k, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

/// An (accuracy loss, runtime) objective vector. Both objectives are minimized.
///
/// Construction validates the point, so every value of this type is finite
/// with `accuracy_loss >= 0` and `runtime > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct TradeoffPoint {
    accuracy_loss: f64,
    runtime: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    accuracy_loss: f64,
    runtime: f64,
}

impl TryFrom<RawPoint> for TradeoffPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        TradeoffPoint::new(raw.accuracy_loss, raw.runtime)
    }
}

impl TradeoffPoint {
    pub fn new(accuracy_loss: f64, runtime: f64) -> Result<Self> {
        let invalid = |reason| Error::InvalidPoint {
            accuracy_loss,
            runtime,
            reason,
        };
        if !accuracy_loss.is_finite() || !runtime.is_finite() {
            return Err(invalid("coordinates must be finite"));
        }
        if accuracy_loss < 0.0 {
            return Err(invalid("accuracy loss must be non-negative"));
        }
        if runtime <= 0.0 {
            return Err(invalid("runtime must be positive"));
        }
        Ok(Self { accuracy_loss, runtime })
    }

    pub fn accuracy_loss(&self) -> f64 {
        self.accuracy_loss
    }

    pub fn runtime(&self) -> f64 {
        self.runtime
    }

    /// Exact coordinate equality.
    pub fn same_coordinates(&self, other: &Self) -> bool {
        self.accuracy_loss == other.accuracy_loss && self.runtime == other.runtime
    }
}

impl fmt::Display for TradeoffPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.accuracy_loss, self.runtime)
    }
}

/// A configuration together with its measured trade-off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record<C = Configuration> {
    pub config: C,
    pub point: TradeoffPoint,
}

impl<C> Record<C> {
    pub fn new(config: C, point: TradeoffPoint) -> Self {
        Self { config, point }
    }
}

/// All measured trade-offs of a single approximation framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffSpace {
    framework_id: String,
    knobs: Vec<Knob>,
    records: Vec<Record>,
    default_config: Configuration,
}

impl TradeoffSpace {
    /// Builds a space, checking that every record belongs to `framework_id`,
    /// assigns exactly the declared knobs, is unique by assignment, and that
    /// the default configuration is among the records.
    ///
    /// An empty record list is accepted here; operations that need points
    /// report [`Error::EmptySpace`].
    pub fn new(
        framework_id: impl Into<String>,
        knobs: Vec<Knob>,
        records: Vec<Record>,
        default_config: Configuration,
    ) -> Result<Self> {
        let framework_id = framework_id.into();
        let invalid = |reason: String| Error::InvalidSpace {
            framework: framework_id.clone(),
            reason,
        };
        let names: BTreeSet<&str> = knobs.iter().map(|k| k.name()).collect();
        if names.len() != knobs.len() {
            return Err(invalid("duplicate knob names".into()));
        }
        if default_config.framework_id != framework_id {
            return Err(invalid("default configuration belongs to another framework".into()));
        }
        default_config.validate(&knobs)?;
        let mut seen = BTreeSet::new();
        for record in &records {
            if record.config.framework_id != framework_id {
                return Err(invalid(format!(
                    "record {} belongs to framework `{}`",
                    record.config, record.config.framework_id
                )));
            }
            record.config.validate(&knobs)?;
            if !seen.insert(&record.config.assignment) {
                return Err(invalid(format!("duplicate configuration {}", record.config)));
            }
        }
        if !records.is_empty() && !seen.contains(&default_config.assignment) {
            return Err(invalid(format!("default configuration {default_config} has no record")));
        }
        Ok(Self {
            framework_id,
            knobs,
            records,
            default_config,
        })
    }

    pub fn framework_id(&self) -> &str {
        &self.framework_id
    }

    pub fn knobs(&self) -> &[Knob] {
        &self.knobs
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn default_config(&self) -> &Configuration {
        &self.default_config
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = TradeoffPoint> + '_ {
        self.records.iter().map(|r| r.point)
    }
}

/// Per-dimension bounds used for min-max normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBounds {
    pub accuracy_min: f64,
    pub accuracy_max: f64,
    pub runtime_min: f64,
    pub runtime_max: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knob_invariants() {
        assert!(Knob::new("k", Vec::<String>::new(), 0).is_err());
        assert!(Knob::new("k", ["a", "b"], 2).is_err());
        assert!(Knob::new("k", ["a", "a"], 0).is_err());
        let k = Knob::new("rate", ["1", "2", "4"], 0).unwrap();
        assert_eq!(k.level_count(), 3);
    }

    #[test]
    fn point_validation() {
        assert!(TradeoffPoint::new(f64::NAN, 1.0).is_err());
        assert!(TradeoffPoint::new(0.0, f64::INFINITY).is_err());
        assert!(TradeoffPoint::new(-0.1, 1.0).is_err());
        assert!(TradeoffPoint::new(0.0, 0.0).is_err());
        assert!(TradeoffPoint::new(0.0, 1e-9).is_ok());
    }

    #[test]
    fn point_deserialization_validates() {
        let ok: TradeoffPoint = serde_json::from_str(r#"{"accuracy_loss":0.1,"runtime":2.0}"#).unwrap();
        assert_eq!(ok, TradeoffPoint::new(0.1, 2.0).unwrap());
        assert!(serde_json::from_str::<TradeoffPoint>(r#"{"accuracy_loss":0.1,"runtime":0}"#).is_err());
    }

    #[test]
    fn configuration_validation() {
        let knobs = vec![Knob::indexed("a", 3, 0).unwrap(), Knob::indexed("b", 2, 1).unwrap()];
        assert!(Configuration::new("f", [("a", 2), ("b", 1)]).validate(&knobs).is_ok());
        assert!(Configuration::new("f", [("a", 3), ("b", 1)]).validate(&knobs).is_err());
        assert!(Configuration::new("f", [("a", 0)]).validate(&knobs).is_err());
        assert!(Configuration::new("f", [("a", 0), ("c", 0)]).validate(&knobs).is_err());
        let d = Configuration::defaults("f", &knobs);
        assert_eq!(d, Configuration::new("f", [("a", 0), ("b", 1)]));
        assert_eq!(d.to_string(), "f{a=0,b=1}");
    }

    #[test]
    fn space_rejects_duplicates_and_missing_default() {
        let knobs = vec![Knob::indexed("k", 3, 0).unwrap()];
        let rec = |i: usize, a: f64, r: f64| {
            Record::new(Configuration::new("f", [("k", i)]), TradeoffPoint::new(a, r).unwrap())
        };
        let default = Configuration::defaults("f", &knobs);
        assert!(TradeoffSpace::new(
            "f",
            knobs.clone(),
            vec![rec(0, 0.0, 1.0), rec(0, 0.1, 0.5)],
            default.clone()
        )
        .is_err());
        assert!(TradeoffSpace::new("f", knobs.clone(), vec![rec(1, 0.0, 1.0)], default.clone()).is_err());
        let other = Record::new(
            Configuration::new("g", [("k", 0)]),
            TradeoffPoint::new(0.0, 1.0).unwrap(),
        );
        assert!(TradeoffSpace::new("f", knobs.clone(), vec![other], default.clone()).is_err());
        let space = TradeoffSpace::new("f", knobs, vec![rec(0, 0.0, 1.0), rec(2, 0.2, 0.4)], default).unwrap();
        assert_eq!(space.len(), 2);
    }
}
