//! Insertion mutation: grow a path by one node, re-introducing detour nodes
//! that crossover may have eliminated.

use rand::Rng;

use crate::grading::GradedSubgraph;
use crate::path_enum::Chromosome;
use crate::scalar::Scalar;
use crate::topology::NodeId;

/// Picks a random gap between consecutive path nodes and inserts a node that
/// is linked to both sides and not already on the path, chosen uniformly
/// among the eligible ones. Returns the input unchanged when the chosen gap
/// admits no insertion.
pub fn insertion_mutation<S: Scalar, R: Rng>(
    c: &Chromosome,
    graded: &GradedSubgraph<S>,
    rng: &mut R,
) -> Chromosome {
    let gaps = c.hops();
    if gaps == 0 {
        return c.clone();
    }
    let gap = rng.random_range(0..gaps);
    let (u, v) = (c.nodes()[gap], c.nodes()[gap + 1]);
    let eligible: Vec<NodeId> = graded
        .neighbors(u)
        .iter()
        .copied()
        .filter(|&w| graded.has_link(w, v) && !c.contains(w))
        .collect();
    if eligible.is_empty() {
        return c.clone();
    }
    let w = eligible[rng.random_range(0..eligible.len())];
    let mut nodes = c.nodes().to_vec();
    nodes.insert(gap + 1, w);
    Chromosome::from_nodes(nodes)
}
