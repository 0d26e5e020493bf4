//! Brute-force ground truth: exhaustive depth-first search over the graded
//! subgraph, independent of the breadth-first enumeration the GA consumes.
//! Intended for small instances (roughly 15 nodes and below).

use crate::error::RouteError;
use crate::ga::{path_available_bandwidth, RouteResult};
use crate::grading::GradedSubgraph;
use crate::path_enum::Chromosome;
use crate::scalar::Scalar;
use crate::topology::{Demand, NodeId, Topology};

/// Every simple path from the graded source to the destination with at most
/// `max_hops` hops, by recursive depth-first search with backtracking.
pub fn dfs_all_simple_paths<S: Scalar>(
    graded: &GradedSubgraph<S>,
    source: NodeId,
    destination: NodeId,
    max_hops: usize,
) -> Vec<Chromosome> {
    fn recurse<S: Scalar>(
        graded: &GradedSubgraph<S>,
        destination: NodeId,
        max_hops: usize,
        current: &mut Vec<NodeId>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Chromosome>,
    ) {
        let last = *current.last().unwrap();
        if last == destination {
            out.push(Chromosome::from_nodes(current.clone()));
            return;
        }
        if current.len() > max_hops {
            return;
        }
        for &next in graded.neighbors(last) {
            if !on_path[next.0] {
                current.push(next);
                on_path[next.0] = true;
                recurse(graded, destination, max_hops, current, on_path, out);
                on_path[next.0] = false;
                current.pop();
            }
        }
    }

    let mut out = Vec::new();
    if !graded.is_admitted(source) || !graded.is_admitted(destination) || source == destination {
        return out;
    }
    let mut on_path = vec![false; graded.node_count()];
    on_path[source.0] = true;
    let mut current = vec![source];
    recurse(graded, destination, max_hops, &mut current, &mut on_path, &mut out);
    out
}

/// Exhaustively finds the optimal feasible route: among paths on which every
/// link offers strictly positive available bandwidth, the fewest hops win,
/// ties going to the larger bottleneck and then lexicographic path order.
/// Deterministic and RNG-free.
pub fn brute_force_optimal<S: Scalar>(
    graded: &GradedSubgraph<S>,
    topo: &Topology<S>,
    demand: &Demand<S>,
    max_hops: usize,
) -> Result<RouteResult<S>, RouteError> {
    let mut best: Option<(Chromosome, S)> = None;
    for path in dfs_all_simple_paths(graded, demand.source, demand.destination, max_hops) {
        let ab = path_available_bandwidth(&path, topo, demand);
        if ab <= S::zero() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((incumbent, inc_ab)) => path
                .hops()
                .cmp(&incumbent.hops())
                .then_with(|| inc_ab.partial_cmp(&ab).expect("finite bandwidths"))
                .then_with(|| path.cmp(incumbent))
                .is_lt(),
        };
        if better {
            best = Some((path, ab));
        }
    }
    let (path, bottleneck) = best.ok_or_else(|| {
        RouteError::NoRoute("no feasible path within the hop bound".into())
    })?;
    Ok(RouteResult {
        hop_count: path.hops(),
        path,
        bottleneck,
        probability: S::one(),
        trace: Vec::new(),
    })
}
