//! QoS-graded genetic-algorithm routing engine.
//!
//! The library models a network as an undirected graph with per-node QoS
//! attributes (bandwidth, jitter, loss) and per-link utilities, then answers
//! routing demands in two stages:
//!
//! 1. **Grading** — nodes whose delay, jitter and loss all fall below
//!    configured thresholds are admitted into a graded subgraph
//!    (demand endpoints are always admitted).
//! 2. **GA path selection** — all simple source→destination paths in the
//!    graded subgraph are enumerated breadth-first and grouped by hop count;
//!    a small population evolves over a fixed number of generations with
//!    elitism, roulette-wheel selection, partially mapped crossover and
//!    insertion mutation. The winning route maximizes bottleneck available
//!    bandwidth at minimum hop count.
//!
//! A brute-force [`oracle`] provides ground truth for small instances, and a
//! file-backed [`kb`] caches computed routes per scenario.
//!
//! All numeric quantities are generic over [`Scalar`] (`f32` or `f64`);
//! every public type defaults its scalar parameter to `f64`. Runs are fully
//! deterministic: a seed plus the inputs determine the whole trace.

pub mod error;
pub mod ga;
pub mod grading;
pub mod kb;
pub mod oracle;
pub mod path_enum;
pub mod scalar;
pub mod topology;

pub use error::{ConfigError, GradingError, KbError, RouteError, TopologyError};
pub use ga::{
    evolve, final_selection, fitness_values, insertion_mutation, multipoint_crossover,
    path_available_bandwidth, roulette_pick, roulette_select, selection_probability,
    single_point_crossover, validate, CrossoverKind, FitnessRecord, GaConfig, GenerationReport,
    RouteResult,
};
pub use grading::{grade_nodes, node_delay, GradedSubgraph, QosThresholds};
pub use kb::{scenario_key, KnowledgeBase, KnowledgeEntry, ScenarioKey};
pub use oracle::brute_force_optimal;
pub use path_enum::{enumerate_paths, Chromosome, PathPool};
pub use scalar::Scalar;
pub use topology::{
    available_bandwidth, generate_random_topology, Demand, Link, NodeId, NodeQoS, QosRanges,
    Topology,
};

/// Default scalar for the concrete type aliases below.
pub type DefaultScalar = f64;

/// `f64` instantiations of the generic core types.
pub type Topology64 = Topology<f64>;
pub type Demand64 = Demand<f64>;
pub type QosThresholds64 = QosThresholds<f64>;
pub type GaConfig64 = GaConfig<f64>;
pub type RouteResult64 = RouteResult<f64>;
