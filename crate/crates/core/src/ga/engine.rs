//! Generation loop: seeding, elitism, operator fills, reporting and final
//! route selection.
//!
//! Determinism contract: a single seeded RNG drives the run, and draws are
//! consumed in a fixed order — seeding first (one draw per candidate), then
//! per generation, per slot: one operator draw followed by the operator's
//! own draws, with one wheel draw whenever an operator yields nothing
//! usable. Identical inputs and seed therefore reproduce the trace exactly.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::RouteError;
use crate::ga::roulette::roulette_pick_f64;
use crate::ga::{
    insertion_mutation, multipoint_crossover, normalize_fitness, path_available_bandwidth,
    selection_probability, single_point_crossover, validate, CrossoverKind, FitnessRecord,
    GaConfig, GenerationReport, RouteResult,
};
use crate::grading::GradedSubgraph;
use crate::path_enum::{Chromosome, LabelMap, PathPool};
use crate::scalar::Scalar;
use crate::topology::{Demand, Topology};

struct Engine<'a, S: Scalar> {
    pool_paths: Vec<&'a Chromosome>,
    pool_ab: Vec<S>,
    pool: &'a PathPool,
    topo: &'a Topology<S>,
    graded: &'a GradedSubgraph<S>,
    demand: &'a Demand<S>,
    config: &'a GaConfig<S>,
    labels: LabelMap,
    rng: ChaCha8Rng,
}

impl<'a, S: Scalar> Engine<'a, S> {
    fn new(
        pool: &'a PathPool,
        topo: &'a Topology<S>,
        graded: &'a GradedSubgraph<S>,
        demand: &'a Demand<S>,
        config: &'a GaConfig<S>,
    ) -> Self {
        let pool_paths: Vec<&Chromosome> = pool.iter().collect();
        let pool_ab: Vec<S> = pool_paths
            .iter()
            .map(|c| path_available_bandwidth(c, topo, demand))
            .collect();
        Engine {
            labels: LabelMap::new(pool_paths.len()),
            pool_paths,
            pool_ab,
            pool,
            topo,
            graded,
            demand,
            config,
            rng: ChaCha8Rng::seed_from_u64(config.rng_seed),
        }
    }

    /// The reference chromosome carried into every generation: shortest pool
    /// path, ties broken by higher available bandwidth, then pool (lexicographic)
    /// order.
    fn elite_index(&self) -> usize {
        let shortest_group = self.pool.groups()[0].1.len();
        let mut best = 0;
        for i in 1..shortest_group {
            if self.pool_ab[i] > self.pool_ab[best] {
                best = i;
            }
        }
        best
    }

    /// Draws the configured number of distinct candidates from the pool with
    /// weight inversely proportional to hop count, keeps the shortest
    /// (pool-order ties), and force-includes the elite.
    fn initial_population(&mut self, elite_idx: usize) -> Vec<Chromosome> {
        let draw_count = self.config.initial_candidates.min(self.pool_paths.len());
        let mut weights: Vec<f64> = self
            .pool_paths
            .iter()
            .map(|c| 1.0 / c.hops() as f64)
            .collect();
        let mut candidates = Vec::with_capacity(draw_count);
        for _ in 0..draw_count {
            let idx = roulette_pick_f64(&weights, &mut self.rng)
                .expect("pool weights are positive until exhausted");
            candidates.push(idx);
            weights[idx] = 0.0;
        }
        // Pool order is (hops ascending, lexicographic), so sorting indices
        // sorts candidates by length with lexicographic ties.
        candidates.sort_unstable();
        candidates.truncate(self.config.population_size);
        if !candidates.contains(&elite_idx) {
            if candidates.len() >= self.config.population_size {
                candidates.pop();
            }
            candidates.push(elite_idx);
            candidates.sort_unstable();
        }
        let mut population = vec![self.pool_paths[elite_idx].clone()];
        population.extend(
            candidates
                .into_iter()
                .filter(|&i| i != elite_idx)
                .map(|i| self.pool_paths[i].clone()),
        );
        population
    }

    fn build_report(&mut self, generation_index: usize, population: &[Chromosome]) -> GenerationReport<S> {
        let abs: Vec<S> = population
            .iter()
            .map(|c| path_available_bandwidth(c, self.topo, self.demand))
            .collect();
        let fitness = normalize_fitness(&abs);
        let probability = selection_probability(&fitness, 0);
        let records: Vec<FitnessRecord<S>> = population
            .iter()
            .enumerate()
            .map(|(i, c)| FitnessRecord {
                label: self.labels.label_for(self.pool, c),
                chromosome: c.clone(),
                nodes_visited: c.node_count(),
                available_bandwidth: abs[i],
                fitness: fitness[i],
                selection_probability: probability[i],
                elite: i == 0,
            })
            .collect();
        GenerationReport {
            generation_index,
            elite_label: records[0].label.clone(),
            records,
        }
    }

    /// Fills the next generation: the elite keeps slot 0, every other slot
    /// draws an operator. Chromosomes that are invalid, carry no bandwidth,
    /// or already sit in the next generation are replaced by a wheel draw.
    fn next_population(&mut self, prev: &GenerationReport<S>, elite: &Chromosome) -> Vec<Chromosome> {
        let mut next = vec![elite.clone()];
        while next.len() < self.config.population_size {
            let before = next.len();
            let u = self.rng.random::<f64>();
            if u < self.config.crossover_rate {
                self.attempt_crossover(prev, &mut next);
            } else if u < self.config.crossover_rate + self.config.mutation_rate {
                self.attempt_mutation(prev, &mut next);
            } else {
                self.attempt_plain_selection(prev, &mut next);
            }
            if next.len() == before && !self.wheel_draw(&mut next) {
                break; // every pool path is already in the generation
            }
        }
        next
    }

    /// True iff the chromosome may enter the next generation: structurally
    /// valid, positive path bandwidth (a saturated link cannot participate
    /// in a route), and not already present.
    fn admissible(&self, c: &Chromosome, next: &[Chromosome]) -> bool {
        validate(c, self.graded)
            && path_available_bandwidth(c, self.topo, self.demand) > S::zero()
            && !next.contains(c)
    }

    fn attempt_crossover(&mut self, prev: &GenerationReport<S>, next: &mut Vec<Chromosome>) {
        // Parents must share a length: group the current population by hop
        // count and keep groups with at least two distinct members.
        let mut by_hops: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, r) in prev.records.iter().enumerate() {
            by_hops.entry(r.chromosome.hops()).or_default().push(i);
        }
        let eligible: Vec<usize> = by_hops
            .values()
            .filter(|g| g.len() >= 2)
            .flatten()
            .copied()
            .collect();
        if eligible.is_empty() {
            // No pairable lengths: the draw falls through to plain selection.
            self.attempt_plain_selection(prev, next);
            return;
        }
        // First parent by fitness wheel (uniform when the group mass is 0),
        // second parent uniform among its equal-length peers.
        let weights: Vec<f64> = eligible
            .iter()
            .map(|&i| prev.records[i].fitness.to_f64_lossy())
            .collect();
        let first = if weights.iter().sum::<f64>() > 0.0 {
            eligible[roulette_pick_f64(&weights, &mut self.rng).expect("positive mass")]
        } else {
            eligible[self.rng.random_range(0..eligible.len())]
        };
        let p1 = &prev.records[first].chromosome;
        let peers: Vec<usize> = by_hops[&p1.hops()]
            .iter()
            .copied()
            .filter(|&i| i != first)
            .collect();
        let p2 = &prev.records[peers[self.rng.random_range(0..peers.len())]].chromosome;

        let (c1, c2) = match self.config.crossover {
            CrossoverKind::MultiPointPmx => multipoint_crossover(p1, p2, &mut self.rng),
            CrossoverKind::SinglePoint => single_point_crossover(p1, p2, &mut self.rng),
        };
        for child in [c1, c2] {
            if next.len() >= self.config.population_size {
                break;
            }
            if self.admissible(&child, next) {
                next.push(child);
            }
        }
    }

    fn attempt_mutation(&mut self, prev: &GenerationReport<S>, next: &mut Vec<Chromosome>) {
        let weights: Vec<f64> = prev
            .records
            .iter()
            .map(|r| r.fitness.to_f64_lossy())
            .collect();
        let base = if weights.iter().sum::<f64>() > 0.0 {
            roulette_pick_f64(&weights, &mut self.rng).expect("positive mass")
        } else {
            self.rng.random_range(0..prev.records.len())
        };
        let child = insertion_mutation(&prev.records[base].chromosome, self.graded, &mut self.rng);
        if self.admissible(&child, next) {
            next.push(child);
        }
    }

    fn attempt_plain_selection(&mut self, prev: &GenerationReport<S>, next: &mut Vec<Chromosome>) {
        let weights: Vec<f64> = prev
            .records
            .iter()
            .map(|r| r.fitness.to_f64_lossy())
            .collect();
        let pick = if weights.iter().sum::<f64>() > 0.0 {
            roulette_pick_f64(&weights, &mut self.rng).expect("positive mass")
        } else {
            self.rng.random_range(0..prev.records.len())
        };
        let c = prev.records[pick].chromosome.clone();
        if !next.contains(&c) {
            next.push(c);
        }
    }

    /// Fallback selection wheel over the pool. Draws from the shortest
    /// length group that still has an unused path with positive bandwidth,
    /// with slices proportional to available bandwidth; when no such path
    /// remains anywhere, falls back to an inverse-length wheel over all
    /// unused paths. Returns false when the pool is exhausted.
    fn wheel_draw(&mut self, next: &mut Vec<Chromosome>) -> bool {
        let mut offset = 0;
        for (_, group) in self.pool.groups() {
            let mut weights = vec![0.0f64; group.len()];
            let mut mass = 0.0;
            for (j, c) in group.iter().enumerate() {
                let ab = self.pool_ab[offset + j].to_f64_lossy();
                if ab > 0.0 && !next.contains(c) {
                    weights[j] = ab;
                    mass += ab;
                }
            }
            if mass > 0.0 {
                let j = roulette_pick_f64(&weights, &mut self.rng).expect("positive mass");
                next.push(group[j].clone());
                return true;
            }
            offset += group.len();
        }
        // No feasible unused path: spin an inverse-length wheel over the rest.
        let weights: Vec<f64> = self
            .pool_paths
            .iter()
            .map(|c| {
                if next.contains(c) {
                    0.0
                } else {
                    1.0 / c.hops() as f64
                }
            })
            .collect();
        match roulette_pick_f64(&weights, &mut self.rng) {
            Ok(idx) => {
                next.push(self.pool_paths[idx].clone());
                true
            }
            Err(_) => false,
        }
    }
}

/// Runs the generation loop over an enumerated path pool and returns the
/// selected route with its full trace. `on_generation` observes each
/// generation's report as it is produced.
///
/// The configuration must satisfy [`GaConfig::validate`].
pub fn evolve<S: Scalar>(
    pool: &PathPool,
    topo: &Topology<S>,
    graded: &GradedSubgraph<S>,
    demand: &Demand<S>,
    config: &GaConfig<S>,
    mut on_generation: impl FnMut(&GenerationReport<S>),
) -> Result<RouteResult<S>, RouteError> {
    config.validate().expect("GA configuration must be valid");
    if pool.is_empty() {
        return Err(RouteError::NoRoute("the path pool is empty".into()));
    }
    let mut engine = Engine::new(pool, topo, graded, demand, config);
    let elite_idx = engine.elite_index();
    let elite = engine.pool_paths[elite_idx].clone();

    let mut population = engine.initial_population(elite_idx);
    let mut trace: Vec<GenerationReport<S>> = Vec::with_capacity(config.generations);
    for generation in 1..=config.generations {
        if generation > 1 {
            let prev = trace.last().unwrap().clone();
            population = engine.next_population(&prev, &elite);
        }
        let report = engine.build_report(generation, &population);
        on_generation(&report);
        trace.push(report);
    }

    let mut result = final_selection(trace.last().unwrap(), config.selection_floor)?;
    result.trace = trace;
    Ok(result)
}

/// Picks the route from the final generation: among feasible records whose
/// reported probability clears the floor (the elite row reports 1, so a
/// feasible elite is always considered), the fewest hops win, ties going to
/// higher probability and then lexicographic path order. When nothing clears
/// the floor, the feasible record with the highest reported probability wins
/// (ties: fewer hops, then lexicographic). Errors when every record is
/// infeasible.
pub fn final_selection<S: Scalar>(
    last: &GenerationReport<S>,
    selection_floor: S,
) -> Result<RouteResult<S>, RouteError> {
    let cleared: Vec<&FitnessRecord<S>> = last
        .records
        .iter()
        .filter(|r| r.available_bandwidth > S::zero() && r.selection_probability > selection_floor)
        .collect();
    let winner = if !cleared.is_empty() {
        cleared
            .into_iter()
            .min_by(|x, y| {
                x.chromosome
                    .hops()
                    .cmp(&y.chromosome.hops())
                    .then_with(|| {
                        y.selection_probability
                            .partial_cmp(&x.selection_probability)
                            .expect("probabilities are finite")
                    })
                    .then_with(|| x.chromosome.cmp(&y.chromosome))
            })
            .expect("non-empty")
    } else {
        let feasible: Vec<&FitnessRecord<S>> = last
            .records
            .iter()
            .filter(|r| r.available_bandwidth > S::zero())
            .collect();
        if feasible.is_empty() {
            return Err(RouteError::NoRoute(
                "every chromosome in the final generation is infeasible".into(),
            ));
        }
        feasible
            .into_iter()
            .min_by(|x, y| {
                y.selection_probability
                    .partial_cmp(&x.selection_probability)
                    .expect("probabilities are finite")
                    .then_with(|| x.chromosome.hops().cmp(&y.chromosome.hops()))
                    .then_with(|| x.chromosome.cmp(&y.chromosome))
            })
            .expect("non-empty")
    };
    Ok(RouteResult {
        path: winner.chromosome.clone(),
        hop_count: winner.chromosome.hops(),
        bottleneck: winner.available_bandwidth,
        probability: winner.selection_probability,
        trace: Vec::new(),
    })
}
