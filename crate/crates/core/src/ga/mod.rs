//! Genetic-algorithm path selection.
//!
//! A fixed-size population of candidate routes evolves for a configured
//! number of generations. The shortest pool path is carried unchanged as the
//! elite; the remaining slots are filled by partially mapped crossover
//! between equal-length parents, insertion mutation, and roulette-wheel
//! selection. Fitness is the chromosome's share of the population's total
//! bottleneck available bandwidth; the final route is the hop-minimal
//! chromosome among those whose selection probability clears the floor.

mod crossover;
mod engine;
mod mutation;
mod roulette;

pub use crossover::{multipoint_crossover, single_point_crossover};
pub use engine::{evolve, final_selection};
pub use mutation::insertion_mutation;
pub use roulette::{roulette_pick, roulette_select};

use serde::Serialize;

use crate::error::ConfigError;
use crate::grading::GradedSubgraph;
use crate::path_enum::Chromosome;
use crate::scalar::Scalar;
use crate::topology::{Demand, Topology};

/// Which crossover operator the engine applies to equal-length parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossoverKind {
    /// Partially mapped crossover: swap the segment between two interior
    /// sites and repair conflicts through the induced position mapping.
    MultiPointPmx,
    /// Plain one-cut splice; children may repeat genes and are then
    /// discarded by validation.
    SinglePoint,
}

/// GA engine parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaConfig<S: Scalar = f64> {
    /// Chromosomes kept per generation.
    pub population_size: usize,
    /// Distinct pool paths drawn before truncating to the population size.
    pub initial_candidates: usize,
    /// Number of generations to run (and report).
    pub generations: usize,
    /// Probability that a fill slot attempts crossover.
    pub crossover_rate: f64,
    /// Probability that a fill slot attempts mutation.
    pub mutation_rate: f64,
    /// Selection-probability floor a record must clear to be considered for
    /// the final route on hop count.
    pub selection_floor: S,
    pub crossover: CrossoverKind,
    pub rng_seed: u64,
}

impl<S: Scalar> Default for GaConfig<S> {
    fn default() -> Self {
        GaConfig {
            population_size: 5,
            initial_candidates: 10,
            generations: 5,
            crossover_rate: 0.95,
            mutation_rate: 0.05,
            selection_floor: S::from_f64_lossy(0.5),
            crossover: CrossoverKind::MultiPointPmx,
            rng_seed: 1,
        }
    }
}

impl<S: Scalar> GaConfig<S> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size == 0 {
            return Err(ConfigError::Invalid("population size must be at least 1".into()));
        }
        if self.initial_candidates < self.population_size {
            return Err(ConfigError::Invalid(format!(
                "initial candidates ({}) must be at least the population size ({})",
                self.initial_candidates, self.population_size
            )));
        }
        if self.generations == 0 {
            return Err(ConfigError::Invalid("generations must be at least 1".into()));
        }
        for (name, rate) in [("crossover rate", self.crossover_rate), ("mutation rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(ConfigError::Invalid(format!("{name} must lie in [0, 1], got {rate}")));
            }
        }
        if self.crossover_rate + self.mutation_rate > 1.0 {
            return Err(ConfigError::Invalid(format!(
                "crossover rate + mutation rate must not exceed 1, got {}",
                self.crossover_rate + self.mutation_rate
            )));
        }
        let floor = self.selection_floor.to_f64_lossy();
        if !(0.0..=1.0).contains(&floor) {
            return Err(ConfigError::Invalid(format!(
                "selection floor must lie in [0, 1], got {floor}"
            )));
        }
        Ok(())
    }
}

/// One table row: a chromosome's bandwidth, fitness and selection
/// probability within its generation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitnessRecord<S: Scalar = f64> {
    /// Pool-order chromosome id (`C1`, `C2`, ...).
    pub label: String,
    pub chromosome: Chromosome,
    /// Nodes visited by the path, endpoints included.
    pub nodes_visited: usize,
    /// Bottleneck available bandwidth of the path; 0 when infeasible.
    pub available_bandwidth: S,
    /// Share of the population's total available bandwidth.
    pub fitness: S,
    /// Reported selection probability: the elite row reports 1, the other
    /// rows normalize their fitness among themselves.
    pub selection_probability: S,
    pub elite: bool,
}

/// All rows of one generation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationReport<S: Scalar = f64> {
    /// 1-based generation number.
    pub generation_index: usize,
    pub records: Vec<FitnessRecord<S>>,
    pub elite_label: String,
}

/// The selected route plus the full per-generation trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteResult<S: Scalar = f64> {
    pub path: Chromosome,
    pub hop_count: usize,
    /// Bottleneck available bandwidth along the route; strictly positive.
    pub bottleneck: S,
    /// The winning record's effective selection probability in the final
    /// generation.
    pub probability: S,
    pub trace: Vec<GenerationReport<S>>,
}

/// Bottleneck available bandwidth of a path: the minimum over its links of
/// (utility − required bandwidth) when every link offers strictly positive
/// available bandwidth, else 0 (the path cannot carry the demand).
pub fn path_available_bandwidth<S: Scalar>(
    c: &Chromosome,
    topo: &Topology<S>,
    demand: &Demand<S>,
) -> S {
    let mut bottleneck = S::infinity();
    for pair in c.nodes().windows(2) {
        let ab = match topo.utility_between(pair[0], pair[1]) {
            Some(utility) => utility - demand.required_bandwidth,
            None => return S::zero(),
        };
        if ab <= S::zero() {
            return S::zero();
        }
        bottleneck = bottleneck.min(ab);
    }
    if bottleneck.is_finite() {
        bottleneck
    } else {
        S::zero()
    }
}

/// Normalizes available bandwidths into fitness shares summing to 1; all
/// zeros when the population offers no bandwidth at all.
pub(crate) fn normalize_fitness<S: Scalar>(abs: &[S]) -> Vec<S> {
    let total = abs.iter().fold(S::zero(), |acc, &ab| acc + ab);
    if total > S::zero() {
        abs.iter().map(|&ab| ab / total).collect()
    } else {
        vec![S::zero(); abs.len()]
    }
}

/// Fitness of each population member: its bottleneck available bandwidth
/// divided by the population total.
pub fn fitness_values<S: Scalar>(
    population: &[Chromosome],
    topo: &Topology<S>,
    demand: &Demand<S>,
) -> Vec<S> {
    let abs: Vec<S> = population
        .iter()
        .map(|c| path_available_bandwidth(c, topo, demand))
        .collect();
    normalize_fitness(&abs)
}

/// Reported selection probabilities: the elite reports 1; every other entry
/// is its fitness divided by the non-elite fitness total (so the non-elite
/// probabilities sum to 1 whenever any non-elite fitness is positive).
pub fn selection_probability<S: Scalar>(fitnesses: &[S], elite_index: usize) -> Vec<S> {
    let non_elite_total = fitnesses
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != elite_index)
        .fold(S::zero(), |acc, (_, &f)| acc + f);
    fitnesses
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            if i == elite_index {
                S::one()
            } else if non_elite_total > S::zero() {
                f / non_elite_total
            } else {
                S::zero()
            }
        })
        .collect()
}

/// True iff the path satisfies every chromosome invariant against the graded
/// subgraph: correct endpoints, all nodes distinct and admitted, every
/// consecutive pair linked.
pub fn validate<S: Scalar>(c: &Chromosome, graded: &GradedSubgraph<S>) -> bool {
    let nodes = c.nodes();
    if nodes.len() < 2 {
        return false;
    }
    if nodes[0] != graded.source() || *nodes.last().unwrap() != graded.destination() {
        return false;
    }
    let mut seen = std::collections::BTreeSet::new();
    if !nodes.iter().all(|n| seen.insert(*n)) {
        return false;
    }
    nodes.windows(2).all(|w| graded.has_link(w[0], w[1]))
}
