//! NSGA-II over the combined knob genome (Deb et al., 2002): binary
//! tournament on (rank, crowding), uniform crossover, per-gene random-level
//! mutation and elitist (mu + lambda) survivor selection.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combined::CombinedConfiguration;
use crate::error::{Error, Result};
use crate::pareto::excludes;
use crate::search::{evaluate_batch, Aggregation, Evaluated, Evaluator, SearchAudit, SearchOutcome, SearchParameters};
use crate::space::{Configuration, TradeoffPoint, TradeoffSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nsga2Params {
    pub population_size: usize,
    /// Populations evaluated, counting the initial one.
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            population_size: 20,
            generations: 12,
            crossover_rate: 0.9,
            mutation_rate: 0.15,
            seed: 0,
        }
    }
}

impl Nsga2Params {
    /// Default rates with population and generation count sized so that at
    /// most `budget` configurations are evaluated (at least one population
    /// of four).
    pub fn for_budget(budget: usize, seed: u64) -> Self {
        let base = Self::default();
        // small budgets get a smaller population so more than one generation fits
        let population_size = (budget / 4 * 2).clamp(4, base.population_size);
        Self {
            population_size,
            generations: (budget / population_size).max(1),
            seed,
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 || self.generations == 0 {
            return Err(Error::InvalidParams("evaluation budget of zero".into()));
        }
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "population size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        for (name, rate) in [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidParams(format!("{name} rate {rate} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Upper bound on distinct configurations evaluated.
    pub fn budget(&self) -> usize {
        self.population_size * self.generations
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GeneSlot {
    framework: String,
    knob: String,
    levels: usize,
}

/// Flat gene layout: every knob of every framework, frameworks in the order
/// given, knobs in declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenomeLayout {
    slots: Vec<GeneSlot>,
}

impl GenomeLayout {
    pub fn from_spaces(spaces: &[TradeoffSpace]) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut ids = BTreeSet::new();
        let mut slots = Vec::new();
        for s in spaces {
            if !ids.insert(s.framework_id()) {
                return Err(Error::InvalidParams(format!(
                    "framework `{}` supplied twice",
                    s.framework_id()
                )));
            }
            for k in s.knobs() {
                slots.push(GeneSlot {
                    framework: s.framework_id().to_string(),
                    knob: k.name().to_string(),
                    levels: k.level_count(),
                });
            }
        }
        Ok(Self { slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn decode(&self, genes: &[usize]) -> Result<CombinedConfiguration> {
        if genes.len() != self.slots.len() {
            return Err(Error::LengthMismatch {
                left: genes.len(),
                right: self.slots.len(),
            });
        }
        let mut parts: BTreeMap<&str, Configuration> = BTreeMap::new();
        for (slot, &g) in self.slots.iter().zip(genes) {
            if g >= slot.levels {
                return Err(Error::InvalidConfiguration {
                    framework: slot.framework.clone(),
                    reason: format!("gene for knob `{}` is {g}, knob has {} levels", slot.knob, slot.levels),
                });
            }
            parts
                .entry(&slot.framework)
                .or_insert_with(|| Configuration::new(slot.framework.clone(), Vec::<(String, usize)>::new()))
                .assignment
                .insert(slot.knob.clone(), g);
        }
        CombinedConfiguration::new(parts.into_values())
    }

    pub fn encode(&self, config: &CombinedConfiguration) -> Result<Vec<usize>> {
        self.slots
            .iter()
            .map(|slot| {
                config
                    .part(&slot.framework)
                    .and_then(|c| c.assignment.get(&slot.knob).copied())
                    .filter(|&g| g < slot.levels)
                    .ok_or_else(|| Error::InvalidConfiguration {
                        framework: slot.framework.clone(),
                        reason: format!("knob `{}` missing or out of range", slot.knob),
                    })
            })
            .collect()
    }

    fn random<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        self.slots.iter().map(|s| rng.gen_range(0..s.levels)).collect()
    }
}

/// Non-domination rank of every point (0 = non-dominated).
pub fn fast_nondominated_sort(points: &[TradeoffPoint]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            if excludes(&points[p], &points[q]) {
                dominates_list[p].push(q);
                dominated_by_count[q] += 1;
            } else if excludes(&points[q], &points[p]) {
                dominates_list[q].push(p);
                dominated_by_count[p] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut front: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    let mut level = 0;
    while !front.is_empty() {
        let mut next = Vec::new();
        for &p in &front {
            rank[p] = level;
            for &q in &dominates_list[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        level += 1;
        front = next;
    }
    rank
}

/// Crowding distance of each point within one front. Boundary points in
/// either objective are infinite.
pub fn crowding_distance(front: &[TradeoffPoint]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let objectives: [fn(&TradeoffPoint) -> f64; 2] = [TradeoffPoint::accuracy_loss, TradeoffPoint::runtime];
    for objective in objectives {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| objective(&front[a]).total_cmp(&objective(&front[b])));
        let lo = objective(&front[order[0]]);
        let hi = objective(&front[order[n - 1]]);
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..n - 1 {
                let gap = objective(&front[order[w + 1]]) - objective(&front[order[w - 1]]);
                distance[order[w]] += gap / (hi - lo);
            }
        }
    }
    distance
}

/// Rank and crowding distance of every member of a population.
fn rank_and_crowd(points: &[TradeoffPoint]) -> (Vec<usize>, Vec<f64>) {
    let rank = fast_nondominated_sort(points);
    let mut crowd = vec![0.0; points.len()];
    let levels = rank.iter().copied().max().map_or(0, |m| m + 1);
    for level in 0..levels {
        let members: Vec<usize> = (0..points.len()).filter(|&i| rank[i] == level).collect();
        let front: Vec<TradeoffPoint> = members.iter().map(|&i| points[i]).collect();
        for (&i, d) in members.iter().zip(crowding_distance(&front)) {
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

fn crowded_cmp(rank: &[usize], crowd: &[f64], a: usize, b: usize) -> Ordering {
    rank[a].cmp(&rank[b]).then_with(|| crowd[b].total_cmp(&crowd[a]))
}

/// Stateful NSGA-II run; [`nsga2_search`] drives it to completion.
pub struct Nsga2<'a, E: Evaluator + ?Sized> {
    layout: GenomeLayout,
    params: Nsga2Params,
    evaluator: &'a E,
    inputs: Vec<String>,
    aggregation: Aggregation,
    rng: ChaCha8Rng,
    memo: HashMap<Vec<usize>, usize>,
    log: Vec<Evaluated>,
    population: Vec<Vec<usize>>,
    generation: usize,
}

impl<'a, E: Evaluator + ?Sized> Nsga2<'a, E> {
    /// Validates parameters and evaluates a random initial population.
    pub fn new(
        spaces: &[TradeoffSpace],
        params: Nsga2Params,
        evaluator: &'a E,
        inputs: &[String],
        aggregation: Aggregation,
    ) -> Result<Self> {
        params.validate()?;
        if inputs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let layout = GenomeLayout::from_spaces(spaces)?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let population: Vec<Vec<usize>> = (0..params.population_size).map(|_| layout.random(&mut rng)).collect();
        let mut run = Self {
            layout,
            params,
            evaluator,
            inputs: inputs.to_vec(),
            aggregation,
            rng,
            memo: HashMap::new(),
            log: Vec::new(),
            population,
            generation: 1,
        };
        let initial = run.population.clone();
        run.evaluate_new(&initial)?;
        Ok(run)
    }

    fn evaluate_new(&mut self, genomes: &[Vec<usize>]) -> Result<()> {
        let mut fresh: Vec<Vec<usize>> = Vec::new();
        let mut pending = BTreeSet::new();
        for g in genomes {
            if !self.memo.contains_key(g) && pending.insert(g.clone()) {
                fresh.push(g.clone());
            }
        }
        let configs = fresh
            .iter()
            .map(|g| self.layout.decode(g))
            .collect::<Result<Vec<_>>>()?;
        let evaluated = evaluate_batch(self.evaluator, &configs, &self.inputs, self.aggregation)?;
        for (g, e) in fresh.into_iter().zip(evaluated) {
            self.memo.insert(g, self.log.len());
            self.log.push(e);
        }
        Ok(())
    }

    fn point(&self, genome: &[usize]) -> TradeoffPoint {
        self.log[self.memo[genome]].aggregate
    }

    pub fn population_points(&self) -> Vec<TradeoffPoint> {
        self.population.iter().map(|g| self.point(g)).collect()
    }

    pub fn population(&self) -> &[Vec<usize>] {
        &self.population
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn evaluations(&self) -> usize {
        self.log.len()
    }

    fn tournament(&mut self, rank: &[usize], crowd: &[f64]) -> usize {
        let n = self.population.len();
        let a = self.rng.gen_range(0..n);
        let b = self.rng.gen_range(0..n);
        if crowded_cmp(rank, crowd, b, a) == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn vary(&mut self, p1: &[usize], p2: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let (mut c1, mut c2) = (p1.to_vec(), p2.to_vec());
        if self.rng.gen::<f64>() < self.params.crossover_rate {
            for i in 0..c1.len() {
                if self.rng.gen::<bool>() {
                    std::mem::swap(&mut c1[i], &mut c2[i]);
                }
            }
        }
        for child in [&mut c1, &mut c2] {
            for (gene, slot) in child.iter_mut().zip(&self.layout.slots) {
                if self.rng.gen::<f64>() < self.params.mutation_rate {
                    *gene = self.rng.gen_range(0..slot.levels);
                }
            }
        }
        (c1, c2)
    }

    /// Breeds and evaluates one offspring population, then keeps the best
    /// `population_size` of parents and offspring.
    pub fn step(&mut self) -> Result<()> {
        let n = self.params.population_size;
        let points = self.population_points();
        let (rank, crowd) = rank_and_crowd(&points);

        let mut offspring: Vec<Vec<usize>> = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = self.tournament(&rank, &crowd);
            let b = self.tournament(&rank, &crowd);
            let (p1, p2) = (self.population[a].clone(), self.population[b].clone());
            let (c1, c2) = self.vary(&p1, &p2);
            offspring.push(c1);
            offspring.push(c2);
        }
        self.evaluate_new(&offspring)?;

        let mut pool = std::mem::take(&mut self.population);
        pool.extend(offspring);
        let pool_points: Vec<TradeoffPoint> = pool.iter().map(|g| self.point(g)).collect();
        let (rank, crowd) = rank_and_crowd(&pool_points);
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&a, &b| crowded_cmp(&rank, &crowd, a, b));
        self.population = order.into_iter().take(n).map(|i| pool[i].clone()).collect();
        self.generation += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<SearchOutcome> {
        let mut per_framework: BTreeMap<String, BTreeSet<&Configuration>> = BTreeMap::new();
        for e in &self.log {
            for (id, part) in e.config.parts() {
                per_framework.entry(id.clone()).or_default().insert(part);
            }
        }
        let audit = SearchAudit {
            candidates_per_framework: per_framework
                .iter()
                .map(|(id, s)| (id.clone(), s.len() as u64))
                .collect(),
            combined_explored: self.log.len() as u64,
            evaluations_performed: self.log.len() as u64,
            seed: self.params.seed,
        };
        let parameters = SearchParameters {
            seed: Some(self.params.seed),
            population_size: Some(self.params.population_size),
            generations: Some(self.params.generations),
            crossover_rate: Some(self.params.crossover_rate),
            mutation_rate: Some(self.params.mutation_rate),
            ..Default::default()
        };
        SearchOutcome::assemble("nsga2", parameters, self.aggregation, &self.inputs, self.log, audit)
    }
}

/// Runs NSGA-II for `params.generations` populations and returns the
/// Pareto-efficient set over every configuration it evaluated.
pub fn nsga2_search<E: Evaluator + ?Sized>(
    spaces: &[TradeoffSpace],
    params: Nsga2Params,
    evaluator: &E,
    inputs: &[String],
    aggregation: Aggregation,
) -> Result<SearchOutcome> {
    let mut run = Nsga2::new(spaces, params, evaluator, inputs, aggregation)?;
    while run.generation() < params.generations {
        run.step()?;
    }
    run.finish()
}
