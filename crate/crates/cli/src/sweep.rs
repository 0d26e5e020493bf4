//! Seeded experiment sweeps: run the GA once per seed, compare against the
//! exhaustive oracle, and aggregate agreement statistics.

use std::fmt;

use garoute_core::{
    brute_force_optimal, enumerate_paths, evolve, grade_nodes, Chromosome, Demand, GaConfig,
    GradedSubgraph, NodeId, QosThresholds, RouteError, Topology,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::run::{load_topology_source, RunError, TopologySource};

/// Decorrelates the demand stream from the topology/GA seed.
const DEMAND_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives a feasible demand for the topology: endpoints uniform and
/// distinct, required bandwidth uniform in (10, 100), resampled until the
/// exhaustive oracle finds a route (at most 50 attempts). Deterministic per
/// seed and independent of the GA's RNG stream.
pub fn derive_feasible_demand(
    topo: &Topology<f64>,
    thresholds: &QosThresholds<f64>,
    seed: u64,
    message_size: f64,
    max_hops: usize,
) -> Option<(Demand<f64>, GradedSubgraph<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ DEMAND_STREAM_SALT);
    let n = topo.node_count();
    for _ in 0..50 {
        let source = NodeId(rng.random_range(0..n));
        let mut destination = NodeId(rng.random_range(0..n));
        if destination == source {
            destination = NodeId((destination.0 + 1) % n);
        }
        let required = 10.0 + rng.random::<f64>() * 90.0;
        let demand = Demand::new(source, destination, required, message_size);
        let graded = grade_nodes(topo, thresholds, &demand);
        if brute_force_optimal(&graded, topo, &demand, max_hops).is_ok() {
            return Some((demand, graded));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    /// GA route equals the oracle route.
    Agreed,
    /// Both produced routes, but different ones.
    Disagreed,
    /// The oracle found a route but the GA reported no-route.
    GaNoRoute,
    /// No feasible demand could be derived for this topology.
    NoFeasibleDemand,
    /// The run failed outright.
    Error(String),
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Agreed => write!(f, "agreed"),
            RunStatus::Disagreed => write!(f, "disagreed"),
            RunStatus::GaNoRoute => write!(f, "ga_no_route"),
            RunStatus::NoFeasibleDemand => write!(f, "no_feasible_demand"),
            RunStatus::Error(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub seed: u64,
    pub status: RunStatus,
    pub ga_path: Option<Chromosome>,
    pub ga_hops: Option<usize>,
    pub ga_bottleneck: Option<f64>,
    pub oracle_path: Option<Chromosome>,
    pub oracle_hops: Option<usize>,
    pub oracle_bottleneck: Option<f64>,
    /// First generation whose population contains the oracle path.
    pub first_generation_with_oracle_path: Option<usize>,
    /// Whether the carried elite is the oracle path.
    pub elite_is_oracle: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub seed_range: (u64, u64),
    /// Runs where both the GA and the oracle produced a route.
    pub comparable: usize,
    pub agreements: usize,
    pub ga_no_route: usize,
    pub no_feasible_demand: usize,
    pub errors: usize,
    pub agreement_rate: f64,
    pub mean_generations_to_oracle: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepParams {
    pub topology: TopologySource,
    /// Fixed demand endpoints and bandwidth; when absent, a feasible demand
    /// is derived per seed.
    pub fixed_demand: Option<(usize, usize, f64)>,
    pub message_size: f64,
    pub thresholds: QosThresholds<f64>,
    pub config: GaConfig<f64>,
    pub max_hops: Option<usize>,
    /// Inclusive seed range.
    pub seeds: (u64, u64),
}

/// Runs one GA-vs-oracle comparison per seed. Per-run failures become rows,
/// not sweep failures; row order is the seed order.
pub fn run_sweep(params: &SweepParams) -> Result<SweepSummary, RunError> {
    let fixed_topo = match &params.topology {
        TopologySource::File(_) => Some(load_topology_source(&params.topology)?),
        TopologySource::Random { .. } => None,
    };
    let mut rows = Vec::new();
    for seed in params.seeds.0..=params.seeds.1 {
        rows.push(run_one(params, fixed_topo.as_ref(), seed));
    }

    let comparable = rows
        .iter()
        .filter(|r| matches!(r.status, RunStatus::Agreed | RunStatus::Disagreed | RunStatus::GaNoRoute))
        .count();
    let agreements = rows.iter().filter(|r| r.status == RunStatus::Agreed).count();
    let ga_no_route = rows.iter().filter(|r| r.status == RunStatus::GaNoRoute).count();
    let no_feasible_demand = rows
        .iter()
        .filter(|r| r.status == RunStatus::NoFeasibleDemand)
        .count();
    let errors = rows
        .iter()
        .filter(|r| matches!(r.status, RunStatus::Error(_)))
        .count();
    let hits: Vec<usize> = rows
        .iter()
        .filter_map(|r| r.first_generation_with_oracle_path)
        .collect();
    Ok(SweepSummary {
        seed_range: params.seeds,
        comparable,
        agreements,
        ga_no_route,
        no_feasible_demand,
        errors,
        agreement_rate: if comparable > 0 {
            agreements as f64 / comparable as f64
        } else {
            0.0
        },
        mean_generations_to_oracle: if hits.is_empty() {
            None
        } else {
            Some(hits.iter().sum::<usize>() as f64 / hits.len() as f64)
        },
        rows,
    })
}

fn run_one(params: &SweepParams, fixed_topo: Option<&Topology<f64>>, seed: u64) -> SweepRow {
    let mut row = SweepRow {
        seed,
        status: RunStatus::Error("not run".into()),
        ga_path: None,
        ga_hops: None,
        ga_bottleneck: None,
        oracle_path: None,
        oracle_hops: None,
        oracle_bottleneck: None,
        first_generation_with_oracle_path: None,
        elite_is_oracle: None,
    };

    let topo_storage;
    let topo: &Topology<f64> = match fixed_topo {
        Some(t) => t,
        None => {
            let TopologySource::Random { nodes, density, .. } = params.topology else {
                unreachable!("fixed topologies are preloaded");
            };
            match garoute_core::generate_random_topology(nodes, density, seed, &Default::default())
            {
                Ok(t) => {
                    topo_storage = t;
                    &topo_storage
                }
                Err(e) => {
                    row.status = RunStatus::Error(e.to_string());
                    return row;
                }
            }
        }
    };
    let max_hops = params.max_hops.unwrap_or(topo.node_count() - 1).max(1);

    let derived = match params.fixed_demand {
        Some((source, destination, required)) => {
            let demand = Demand::new(NodeId(source), NodeId(destination), required, params.message_size);
            if let Err(e) = demand.validate(topo) {
                row.status = RunStatus::Error(e.to_string());
                return row;
            }
            let graded = grade_nodes(topo, &params.thresholds, &demand);
            Some((demand, graded))
        }
        None => derive_feasible_demand(topo, &params.thresholds, seed, params.message_size, max_hops),
    };
    let Some((demand, graded)) = derived else {
        row.status = RunStatus::NoFeasibleDemand;
        return row;
    };

    let oracle = match brute_force_optimal(&graded, topo, &demand, max_hops) {
        Ok(route) => route,
        Err(RouteError::NoRoute(_)) => {
            row.status = RunStatus::NoFeasibleDemand;
            return row;
        }
        Err(e) => {
            row.status = RunStatus::Error(e.to_string());
            return row;
        }
    };
    row.oracle_path = Some(oracle.path.clone());
    row.oracle_hops = Some(oracle.hop_count);
    row.oracle_bottleneck = Some(oracle.bottleneck);

    let pool = match enumerate_paths(&graded, &demand, max_hops) {
        Ok(pool) => pool,
        Err(e) => {
            row.status = RunStatus::Error(e.to_string());
            return row;
        }
    };
    let config = GaConfig {
        rng_seed: seed,
        ..params.config.clone()
    };
    match evolve(&pool, topo, &graded, &demand, &config, |_| {}) {
        Ok(route) => {
            row.first_generation_with_oracle_path = route
                .trace
                .iter()
                .find(|r| r.records.iter().any(|rec| rec.chromosome == oracle.path))
                .map(|r| r.generation_index);
            row.elite_is_oracle = route
                .trace
                .first()
                .map(|r| r.records[0].chromosome == oracle.path);
            row.status = if route.path == oracle.path {
                RunStatus::Agreed
            } else {
                RunStatus::Disagreed
            };
            row.ga_hops = Some(route.hop_count);
            row.ga_bottleneck = Some(route.bottleneck);
            row.ga_path = Some(route.path);
        }
        Err(RouteError::NoRoute(_)) => {
            row.status = RunStatus::GaNoRoute;
        }
        Err(e) => {
            row.status = RunStatus::Error(e.to_string());
        }
    }
    row
}
