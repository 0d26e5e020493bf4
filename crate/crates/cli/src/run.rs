//! The route pipeline: topology → grading → enumeration → GA → selection,
//! with optional knowledge-base caching and oracle comparison.

use std::fmt;
use std::path::PathBuf;

use garoute_core::kb::KbWarning;
use garoute_core::{
    brute_force_optimal, enumerate_paths, evolve, grade_nodes, scenario_key,
    generate_random_topology, validate, path_available_bandwidth, Demand, GaConfig,
    GradedSubgraph, KnowledgeBase, QosRanges, QosThresholds, RouteError, RouteResult, Topology,
    TopologyError,
};

/// Where the run's topology comes from (exactly one source).
#[derive(Debug, Clone)]
pub enum TopologySource {
    File(PathBuf),
    Random { nodes: usize, density: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

/// Everything one `route` invocation needs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub topology: TopologySource,
    pub source: usize,
    pub destination: usize,
    pub required_bandwidth: f64,
    pub message_size: f64,
    pub thresholds: QosThresholds<f64>,
    pub config: GaConfig<f64>,
    /// Hop bound for enumeration; defaults to node count − 1.
    pub max_hops: Option<usize>,
    pub format: OutputFormat,
    pub kb_path: Option<PathBuf>,
    pub oracle_check: bool,
    pub dump_pool: bool,
}

impl RunSpec {
    pub fn new(topology: TopologySource, source: usize, destination: usize, required_bandwidth: f64) -> Self {
        RunSpec {
            topology,
            source,
            destination,
            required_bandwidth,
            message_size: 12_000.0,
            thresholds: QosThresholds::default(),
            config: GaConfig::default(),
            max_hops: None,
            format: OutputFormat::Text,
            kb_path: None,
            oracle_check: false,
            dump_pool: false,
        }
    }
}

/// Failure classes mapped to distinct exit codes by the binary.
#[derive(Debug)]
pub enum RunError {
    /// Bad input: file, parse, or validation problems.
    Input(String),
    /// The engine ran but found no feasible route.
    NoRoute(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(msg) => write!(f, "{msg}"),
            RunError::NoRoute(msg) => write!(f, "no route: {msg}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<TopologyError> for RunError {
    fn from(e: TopologyError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<RouteError> for RunError {
    fn from(e: RouteError) -> Self {
        match e {
            RouteError::NoRoute(msg) => RunError::NoRoute(msg),
            other => RunError::Input(other.to_string()),
        }
    }
}

/// The computed route and everything the renderer needs.
#[derive(Debug, Clone)]
pub struct RouteOutcome {
    pub topology: Topology<f64>,
    pub demand: Demand<f64>,
    pub max_hops: usize,
    pub route: RouteResult<f64>,
    pub oracle: Option<RouteResult<f64>>,
    /// True when the route was answered from the knowledge base.
    pub from_cache: bool,
    pub kb_warnings: Vec<KbWarning>,
    pub pool_dump: Option<String>,
}

pub fn load_topology_source(source: &TopologySource) -> Result<Topology<f64>, RunError> {
    match source {
        TopologySource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))?;
            Topology::parse(&text)
                .map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
        }
        TopologySource::Random { nodes, density, seed } => {
            Ok(generate_random_topology(*nodes, *density, *seed, &QosRanges::default())?)
        }
    }
}

fn graded_for(
    topo: &Topology<f64>,
    spec: &RunSpec,
) -> Result<(Demand<f64>, GradedSubgraph<f64>), RunError> {
    let demand = Demand::new(
        garoute_core::NodeId(spec.source),
        garoute_core::NodeId(spec.destination),
        spec.required_bandwidth,
        spec.message_size,
    );
    demand.validate(topo)?;
    spec.thresholds
        .validate()
        .map_err(|e| RunError::Input(e.to_string()))?;
    spec.config
        .validate()
        .map_err(|e| RunError::Input(e.to_string()))?;
    let graded = grade_nodes(topo, &spec.thresholds, &demand);
    Ok((demand, graded))
}

/// Runs the full pipeline for one demand. With a knowledge base configured,
/// an identical scenario is answered from storage (the stored route is
/// re-validated against the current graded subgraph first); otherwise the
/// computed route is stored for future runs.
pub fn run_route(spec: &RunSpec) -> Result<RouteOutcome, RunError> {
    let topo = load_topology_source(&spec.topology)?;
    let (demand, graded) = graded_for(&topo, spec)?;
    let max_hops = spec.max_hops.unwrap_or(topo.node_count() - 1).max(1);

    let kb = spec.kb_path.as_ref().map(KnowledgeBase::open);
    let key = kb
        .as_ref()
        .map(|_| scenario_key(&topo, &demand, &spec.thresholds, &spec.config, max_hops));
    let mut kb_warnings = Vec::new();

    if let (Some(kb), Some(key)) = (&kb, &key) {
        let (hit, warnings) = kb
            .lookup::<f64>(key)
            .map_err(|e| RunError::Input(e.to_string()))?;
        kb_warnings = warnings;
        if let Some(entry) = hit {
            let fresh_bottleneck = path_available_bandwidth(&entry.path, &topo, &demand);
            if validate(&entry.path, &graded) && fresh_bottleneck > 0.0 {
                return Ok(RouteOutcome {
                    route: RouteResult {
                        hop_count: entry.path.hops(),
                        path: entry.path,
                        bottleneck: fresh_bottleneck,
                        probability: 1.0,
                        trace: Vec::new(),
                    },
                    oracle: run_oracle(spec, &graded, &topo, &demand, max_hops)?,
                    from_cache: true,
                    kb_warnings,
                    pool_dump: None,
                    topology: topo,
                    demand,
                    max_hops,
                });
            }
            // Stale or invalid entry: fall through and recompute.
        }
    }

    let pool = enumerate_paths(&graded, &demand, max_hops)?;
    let pool_dump = spec.dump_pool.then(|| pool.dump());
    let route = evolve(&pool, &topo, &graded, &demand, &spec.config, |_| {})?;

    if let (Some(kb), Some(key)) = (&kb, &key) {
        kb.store_route(key, &route)
            .map_err(|e| RunError::Input(e.to_string()))?;
    }

    Ok(RouteOutcome {
        oracle: run_oracle(spec, &graded, &topo, &demand, max_hops)?,
        route,
        from_cache: false,
        kb_warnings,
        pool_dump,
        topology: topo,
        demand,
        max_hops,
    })
}

fn run_oracle(
    spec: &RunSpec,
    graded: &GradedSubgraph<f64>,
    topo: &Topology<f64>,
    demand: &Demand<f64>,
    max_hops: usize,
) -> Result<Option<RouteResult<f64>>, RunError> {
    if !spec.oracle_check {
        return Ok(None);
    }
    match brute_force_optimal(graded, topo, demand, max_hops) {
        Ok(route) => Ok(Some(route)),
        Err(RouteError::NoRoute(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}
