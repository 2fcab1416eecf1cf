//! Seeded synthetic benchmark with known ground truth.
//!
//! Runtime is multiplicative in per-level multipliers and accuracy loss is
//! additive in per-level contributions plus pairwise interaction terms. With
//! no interactions and no noise the model is separable, so the combined
//! frontier is reachable from the individual frontiers alone.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::InputSet;
use crate::combined::{combine, CombinedConfiguration};
use crate::error::{Error, Result};
use crate::search::{evaluate_stream, Aggregation, Evaluator, SearchAudit, SearchOutcome, SearchParameters};
use crate::space::{Configuration, Knob, Record, TradeoffPoint, TradeoffSpace};

/// Largest combined space the exhaustive oracle enumerates by default.
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

/// A knob with the runtime multiplier and loss contribution of every level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnobEffects {
    pub knob: Knob,
    pub multipliers: Vec<f64>,
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticFramework {
    pub id: String,
    pub knobs: Vec<KnobEffects>,
}

impl SyntheticFramework {
    pub fn knob_list(&self) -> Vec<Knob> {
        self.knobs.iter().map(|k| k.knob.clone()).collect()
    }

    pub fn default_config(&self) -> Configuration {
        Configuration::defaults(self.id.clone(), &self.knob_list())
    }

    /// Every configuration of this framework, last knob varying fastest.
    pub fn configurations(&self) -> Vec<Configuration> {
        let mut out = vec![Configuration::new(self.id.clone(), Vec::<(String, usize)>::new())];
        for k in &self.knobs {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..k.knob.level_count()).map(move |l| {
                        let mut c = c.clone();
                        c.assignment.insert(k.knob.name().to_string(), l);
                        c
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KnobLevel {
    pub framework: String,
    pub knob: String,
    pub level: usize,
}

/// Extra accuracy loss when both knob levels are selected together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub a: KnobLevel,
    pub b: KnobLevel,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticBenchmark {
    frameworks: Vec<SyntheticFramework>,
    base_runtime: f64,
    interactions: Vec<Interaction>,
    input_noise_scale: f64,
    seed: u64,
    inputs: InputSet,
}

/// Size parameters for [`synth_generate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub frameworks: usize,
    pub knobs_per_framework: usize,
    pub levels_per_knob: usize,
    pub interaction_density: f64,
    pub noise_scale: f64,
    pub train_inputs: usize,
    pub test_inputs: usize,
    pub base_runtime: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            frameworks: 3,
            knobs_per_framework: 2,
            levels_per_knob: 4,
            interaction_density: 0.0,
            noise_scale: 0.0,
            train_inputs: 3,
            test_inputs: 3,
            base_runtime: 10.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.frameworks == 0 || self.knobs_per_framework == 0 || self.levels_per_knob == 0 {
            return bad("framework, knob and level counts must be positive");
        }
        if self.train_inputs == 0 || self.test_inputs == 0 {
            return bad("training and test input counts must be positive");
        }
        if !(0.0..=1.0).contains(&self.interaction_density) {
            return bad("interaction density must lie in [0, 1]");
        }
        if !(0.0..1.0).contains(&self.noise_scale) {
            return bad("noise scale must lie in [0, 1)");
        }
        if !(self.base_runtime > 0.0 && self.base_runtime.is_finite()) {
            return bad("base runtime must be positive");
        }
        Ok(())
    }
}

// FNV-1a followed by a splitmix64 finalizer: stable across platforms and
// toolchains, unlike std's DefaultHasher.
fn stable_hash(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

impl SyntheticBenchmark {
    pub fn new(
        frameworks: Vec<SyntheticFramework>,
        base_runtime: f64,
        interactions: Vec<Interaction>,
        input_noise_scale: f64,
        seed: u64,
        inputs: InputSet,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if frameworks.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(base_runtime > 0.0 && base_runtime.is_finite()) {
            return bad(format!("base runtime {base_runtime} must be positive"));
        }
        if !(0.0..1.0).contains(&input_noise_scale) {
            return bad(format!("noise scale {input_noise_scale} must lie in [0, 1)"));
        }
        let mut ids = std::collections::BTreeSet::new();
        for f in &frameworks {
            if !ids.insert(&f.id) {
                return bad(format!("framework `{}` declared twice", f.id));
            }
            for k in &f.knobs {
                let n = k.knob.level_count();
                if k.multipliers.len() != n || k.losses.len() != n {
                    return bad(format!(
                        "knob `{}` effect tables do not match its {n} levels",
                        k.knob.name()
                    ));
                }
                let d = k.knob.default_index();
                if k.multipliers[d] != 1.0 || k.losses[d] != 0.0 {
                    return bad(format!(
                        "default level of knob `{}` must have multiplier 1 and loss 0",
                        k.knob.name()
                    ));
                }
                if k.multipliers.iter().any(|&m| !(m > 0.0 && m <= 1.0)) {
                    return bad(format!("multipliers of knob `{}` must lie in (0, 1]", k.knob.name()));
                }
                if k.losses.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
                    return bad(format!(
                        "losses of knob `{}` must be finite and non-negative",
                        k.knob.name()
                    ));
                }
            }
        }
        let bench = Self {
            frameworks,
            base_runtime,
            interactions,
            input_noise_scale,
            seed,
            inputs,
        };
        for i in &bench.interactions {
            if !i.coefficient.is_finite() {
                return bad("interaction coefficients must be finite".into());
            }
            for kl in [&i.a, &i.b] {
                let known = bench
                    .framework(&kl.framework)
                    .and_then(|f| f.knobs.iter().find(|k| k.knob.name() == kl.knob))
                    .is_some_and(|k| kl.level < k.knob.level_count());
                if !known {
                    return bad(format!("interaction references unknown knob level {kl:?}"));
                }
            }
        }
        Ok(bench)
    }

    pub fn frameworks(&self) -> &[SyntheticFramework] {
        &self.frameworks
    }

    pub fn framework(&self, id: &str) -> Option<&SyntheticFramework> {
        self.frameworks.iter().find(|f| f.id == id)
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn inputs(&self) -> &InputSet {
        &self.inputs
    }

    pub fn base_runtime(&self) -> f64 {
        self.base_runtime
    }

    pub fn noise_scale(&self) -> f64 {
        self.input_noise_scale
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn default_config(&self) -> CombinedConfiguration {
        CombinedConfiguration::new(self.frameworks.iter().map(SyntheticFramework::default_config))
            .expect("framework ids are unique")
    }

    /// Number of combined configurations.
    pub fn combined_size(&self) -> u128 {
        self.frameworks
            .iter()
            .map(|f| f.knobs.iter().map(|k| k.knob.level_count() as u128).product::<u128>())
            .product()
    }

    fn check(&self, c: &CombinedConfiguration) -> Result<()> {
        if c.parts().len() != self.frameworks.len() {
            return Err(Error::InvalidConfiguration {
                framework: c.to_string(),
                reason: format!("expected {} frameworks", self.frameworks.len()),
            });
        }
        for f in &self.frameworks {
            let part = c.part(&f.id).ok_or_else(|| Error::InvalidConfiguration {
                framework: f.id.clone(),
                reason: "framework missing from combined configuration".into(),
            })?;
            part.validate(&f.knob_list())?;
        }
        Ok(())
    }

    /// The model's trade-off for `c` on `input_id`.
    pub fn evaluate_config(&self, c: &CombinedConfiguration, input_id: &str) -> Result<TradeoffPoint> {
        self.check(c)?;
        let mut runtime = self.base_runtime;
        let mut loss = 0.0;
        for f in &self.frameworks {
            let part = &c.parts()[&f.id];
            for k in &f.knobs {
                let level = part.assignment[k.knob.name()];
                runtime *= k.multipliers[level];
                loss += k.losses[level];
            }
        }
        let selected = |kl: &KnobLevel| {
            c.part(&kl.framework)
                .and_then(|p| p.assignment.get(&kl.knob))
                .is_some_and(|&l| l == kl.level)
        };
        for i in &self.interactions {
            if selected(&i.a) && selected(&i.b) {
                loss += i.coefficient;
            }
        }
        if self.input_noise_scale > 0.0 {
            let key = c.to_string();
            let h = stable_hash(&[&self.seed.to_le_bytes(), key.as_bytes(), input_id.as_bytes()]);
            let eps_rt = (2.0 * unit(splitmix64(h)) - 1.0) * self.input_noise_scale;
            let eps_acc = (2.0 * unit(splitmix64(h ^ 0x5851_f42d_4c95_7f2d)) - 1.0) * self.input_noise_scale;
            runtime *= 1.0 + eps_rt;
            loss += eps_acc;
        }
        TradeoffPoint::new(loss.max(0.0), runtime)
    }

    /// Each framework's own trade-off space: its configurations with every
    /// other framework at default, aggregated over `inputs`.
    pub fn spaces(&self, inputs: &[String], aggregation: Aggregation) -> Result<Vec<TradeoffSpace>> {
        if inputs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let defaults = self.default_config();
        self.frameworks
            .iter()
            .map(|f| {
                let records = f
                    .configurations()
                    .into_iter()
                    .map(|config| {
                        let combined = CombinedConfiguration::new(defaults.parts().values().map(|d| {
                            if d.framework_id == f.id {
                                config.clone()
                            } else {
                                d.clone()
                            }
                        }))?;
                        let points = inputs
                            .iter()
                            .map(|i| self.evaluate_config(&combined, i))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Record::new(config, aggregation.aggregate(&points)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                TradeoffSpace::new(f.id.clone(), f.knob_list(), records, f.default_config())
            })
            .collect()
    }

    /// Spaces measured on the training inputs with median aggregation.
    pub fn training_spaces(&self) -> Result<Vec<TradeoffSpace>> {
        self.spaces(&self.inputs.training, Aggregation::Median)
    }
}

impl Evaluator for SyntheticBenchmark {
    fn evaluate(&self, config: &CombinedConfiguration, input_id: &str) -> Result<TradeoffPoint> {
        self.evaluate_config(config, input_id)
    }
}

/// Generates a benchmark: deeper levels are faster and lossier, and each
/// cross-framework pair of non-default levels interacts with probability
/// `interaction_density`.
pub fn synth_generate(spec: &SynthSpec) -> Result<SyntheticBenchmark> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut frameworks = Vec::with_capacity(spec.frameworks);
    for f in 0..spec.frameworks {
        let mut knobs = Vec::with_capacity(spec.knobs_per_framework);
        for k in 0..spec.knobs_per_framework {
            let knob = Knob::indexed(format!("k{k}"), spec.levels_per_knob, 0)?;
            // knob-specific efficiency spreads knobs across the trade-off plane
            let efficiency: f64 = rng.gen_range(0.3..3.0);
            let mut multipliers = vec![1.0];
            let mut losses = vec![0.0];
            for l in 1..spec.levels_per_knob {
                multipliers.push(multipliers[l - 1] * rng.gen_range(0.55..0.95));
                losses.push(losses[l - 1] + efficiency * rng.gen_range(0.002..0.02));
            }
            knobs.push(KnobEffects {
                knob,
                multipliers,
                losses,
            });
        }
        frameworks.push(SyntheticFramework {
            id: format!("fw{f}"),
            knobs,
        });
    }

    let levels: Vec<KnobLevel> = frameworks
        .iter()
        .flat_map(|f| {
            f.knobs.iter().flat_map(move |k| {
                (1..k.knob.level_count()).map(move |level| KnobLevel {
                    framework: f.id.clone(),
                    knob: k.knob.name().to_string(),
                    level,
                })
            })
        })
        .collect();
    let mut interactions = Vec::new();
    if spec.interaction_density > 0.0 {
        for (i, a) in levels.iter().enumerate() {
            for b in &levels[i + 1..] {
                if a.framework == b.framework {
                    continue;
                }
                if rng.gen::<f64>() < spec.interaction_density {
                    interactions.push(Interaction {
                        a: a.clone(),
                        b: b.clone(),
                        coefficient: rng.gen_range(-0.03..0.03),
                    });
                }
            }
        }
    }
    let inputs = InputSet::new(
        (0..spec.train_inputs).map(|i| format!("train-{i}")).collect(),
        (0..spec.test_inputs).map(|i| format!("test-{i}")).collect(),
    )?;
    SyntheticBenchmark::new(
        frameworks,
        spec.base_runtime,
        interactions,
        spec.noise_scale,
        spec.seed,
        inputs,
    )
}

/// Evaluates every combined configuration of `bench` on `inputs` and
/// returns the true Pareto-optimal set.
pub fn exhaustive_oracle(bench: &SyntheticBenchmark, inputs: &[String], cap: u128) -> Result<SearchOutcome> {
    let size = bench.combined_size();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let sets: BTreeMap<String, _> = bench
        .frameworks()
        .iter()
        .map(|f| (f.id.clone(), f.configurations().into_iter().collect()))
        .collect();
    let product = combine(&sets)?;
    let evaluated = evaluate_stream(bench, product, inputs, Aggregation::Median)?;
    let audit = SearchAudit {
        candidates_per_framework: sets.iter().map(|(id, s)| (id.clone(), s.len() as u64)).collect(),
        combined_explored: size as u64,
        evaluations_performed: evaluated.len() as u64,
        seed: bench.seed(),
    };
    SearchOutcome::assemble(
        "exhaustive",
        SearchParameters::default(),
        Aggregation::Median,
        inputs,
        evaluated,
        audit,
    )
}
