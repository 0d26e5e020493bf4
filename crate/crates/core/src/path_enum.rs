//! Exhaustive simple-path enumeration over the graded subgraph.
//!
//! All simple source→destination paths up to a hop bound are enumerated
//! breadth-first and grouped by hop count in ascending order; within a group
//! paths are sorted lexicographically. The resulting pool is the GA's
//! candidate universe, so its ordering fixes chromosome labels across runs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::RouteError;
use crate::grading::GradedSubgraph;
use crate::scalar::Scalar;
use crate::topology::{Demand, NodeId};

/// A candidate route: an ordered sequence of distinct node ids from source to
/// destination in which every consecutive pair is a graded-subgraph link.
/// The nodes are the genes of the GA individual.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Chromosome {
    path: Vec<NodeId>,
}

impl Chromosome {
    /// Wraps a node sequence without checking the path invariants; callers
    /// validate against a graded subgraph where needed.
    pub fn from_nodes(path: Vec<NodeId>) -> Self {
        Chromosome { path }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.path
    }

    /// Number of nodes visited, endpoints included.
    pub fn node_count(&self) -> usize {
        self.path.len()
    }

    /// Number of links traversed.
    pub fn hops(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    pub fn source(&self) -> NodeId {
        self.path[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.path.last().expect("chromosome is never empty")
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.path.contains(&id)
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// All enumerated paths, grouped by hop count in strictly ascending order;
/// lexicographic order within each group.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPool {
    groups: Vec<(usize, Vec<Chromosome>)>,
    flat_len: usize,
}

impl PathPool {
    fn from_paths(mut paths: Vec<Chromosome>) -> Self {
        paths.sort_by(|a, b| a.hops().cmp(&b.hops()).then_with(|| a.cmp(b)));
        let flat_len = paths.len();
        let mut groups: Vec<(usize, Vec<Chromosome>)> = Vec::new();
        for p in paths {
            match groups.last_mut() {
                Some((hops, group)) if *hops == p.hops() => group.push(p),
                _ => groups.push((p.hops(), vec![p])),
            }
        }
        PathPool { groups, flat_len }
    }

    /// Groups as `(hop count, paths)` pairs, ascending by hop count.
    pub fn groups(&self) -> &[(usize, Vec<Chromosome>)] {
        &self.groups
    }

    /// Total number of paths across all groups.
    pub fn len(&self) -> usize {
        self.flat_len
    }

    pub fn is_empty(&self) -> bool {
        self.flat_len == 0
    }

    /// Paths in pool order: ascending hop count, lexicographic within a group.
    pub fn iter(&self) -> impl Iterator<Item = &Chromosome> {
        self.groups.iter().flat_map(|(_, g)| g.iter())
    }

    /// Position of a path in pool order, which determines its label.
    pub fn index_of(&self, c: &Chromosome) -> Option<usize> {
        let mut offset = 0;
        for (hops, group) in &self.groups {
            if *hops == c.hops() {
                return group.binary_search(c).ok().map(|i| offset + i);
            }
            offset += group.len();
        }
        None
    }

    /// Debug dump: one path per line, `len=<k>: n0 n1 ... nk`, groups in
    /// ascending order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (hops, group) in &self.groups {
            for p in group {
                out.push_str(&format!("len={hops}: {p}\n"));
            }
        }
        out
    }
}

/// Enumerates every simple source→destination path with at most `max_hops`
/// hops, breadth-first over partial paths so completions appear in
/// ascending-length order. Returns an error when no path exists.
pub fn enumerate_paths<S: Scalar>(
    graded: &GradedSubgraph<S>,
    demand: &Demand<S>,
    max_hops: usize,
) -> Result<PathPool, RouteError> {
    let (src, dst) = (demand.source, demand.destination);
    debug_assert!(graded.is_admitted(src) && graded.is_admitted(dst));

    let mut paths = Vec::new();
    let mut queue: VecDeque<Vec<NodeId>> = VecDeque::new();
    queue.push_back(vec![src]);
    while let Some(prefix) = queue.pop_front() {
        let last = *prefix.last().unwrap();
        if prefix.len() > max_hops {
            // Extending would exceed the hop bound.
            continue;
        }
        for &next in graded.neighbors(last) {
            if prefix.contains(&next) {
                continue;
            }
            let mut extended = prefix.clone();
            extended.push(next);
            if next == dst {
                paths.push(Chromosome::from_nodes(extended));
            } else {
                queue.push_back(extended);
            }
        }
    }

    if paths.is_empty() {
        return Err(RouteError::NoRoute(format!(
            "no simple path from {src} to {dst} within {max_hops} hops"
        )));
    }
    Ok(PathPool::from_paths(paths))
}

/// Pool-order chromosome labels: `C1` for the first pool path, and fresh
/// labels past the pool for operator offspring that exceed the hop bound.
#[derive(Debug, Clone)]
pub struct LabelMap {
    pool_size: usize,
    extra: BTreeMap<Chromosome, usize>,
}

impl LabelMap {
    pub fn new(pool_size: usize) -> Self {
        LabelMap {
            pool_size,
            extra: BTreeMap::new(),
        }
    }

    pub fn label_for(&mut self, pool: &PathPool, c: &Chromosome) -> String {
        if let Some(i) = pool.index_of(c) {
            return format!("C{}", i + 1);
        }
        let next = self.pool_size + self.extra.len() + 1;
        let id = *self.extra.entry(c.clone()).or_insert(next);
        format!("C{id}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{grade_nodes, QosThresholds};
    use crate::topology::{Link, NodeQoS, Topology};

    fn uniform_nodes(n: usize) -> Vec<NodeQoS<f64>> {
        vec![
            NodeQoS {
                bandwidth: 1.0e6,
                jitter: 1.0,
                loss: 0.01,
            };
            n
        ]
    }

    fn graph(n: usize, links: &[(usize, usize)]) -> Topology<f64> {
        let links = links
            .iter()
            .map(|&(a, b)| Link::new(NodeId(a), NodeId(b), 10.0))
            .collect();
        Topology::new(uniform_nodes(n), links).unwrap()
    }

    fn full_grade(topo: &Topology<f64>, s: usize, d: usize) -> (GradedSubgraph<f64>, Demand<f64>) {
        let demand = Demand::new(NodeId(s), NodeId(d), 1.0, 1.0);
        let thresholds = QosThresholds::new(f64::INFINITY, f64::INFINITY, 1.0);
        (grade_nodes(topo, &thresholds, &demand), demand)
    }

    fn chrom(ids: &[usize]) -> Chromosome {
        Chromosome::from_nodes(ids.iter().map(|&i| NodeId(i)).collect())
    }

    #[test]
    fn triangle_pool_is_exhaustive_and_ordered() {
        // s=0, a=1, d=2 with links s-a, a-d, s-d.
        let topo = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let (graded, demand) = full_grade(&topo, 0, 2);
        let pool = enumerate_paths(&graded, &demand, 2).unwrap();
        assert_eq!(pool.len(), 2);
        assert_eq!(pool.groups().len(), 2);
        assert_eq!(pool.groups()[0], (1, vec![chrom(&[0, 2])]));
        assert_eq!(pool.groups()[1], (2, vec![chrom(&[0, 1, 2])]));
    }

    #[test]
    fn unreachable_destination_is_a_no_route_error() {
        // 0-1-2 path graph; grading excludes node 1, disconnecting 0 from 2.
        let mut nodes = uniform_nodes(3);
        nodes[1].loss = 0.9;
        let topo = Topology::new(
            nodes,
            vec![
                Link::new(NodeId(0), NodeId(1), 10.0),
                Link::new(NodeId(1), NodeId(2), 10.0),
            ],
        )
        .unwrap();
        let demand = Demand::new(NodeId(0), NodeId(2), 1.0, 1.0);
        let graded = grade_nodes(&topo, &QosThresholds::default(), &demand);
        assert!(matches!(
            enumerate_paths(&graded, &demand, 2),
            Err(RouteError::NoRoute(_))
        ));
    }

    #[test]
    fn hop_bound_is_respected() {
        let topo = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]);
        let (graded, demand) = full_grade(&topo, 0, 3);
        let capped = enumerate_paths(&graded, &demand, 2).unwrap();
        assert!(capped.iter().all(|p| p.hops() <= 2));
        let full = enumerate_paths(&graded, &demand, 3).unwrap();
        assert!(full.len() > capped.len());
    }

    #[test]
    fn pool_order_and_labels_are_stable() {
        let topo = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]);
        let (graded, demand) = full_grade(&topo, 0, 3);
        let pool = enumerate_paths(&graded, &demand, 3).unwrap();
        let order: Vec<Chromosome> = pool.iter().cloned().collect();
        assert_eq!(
            order,
            vec![
                chrom(&[0, 1, 3]),
                chrom(&[0, 2, 3]),
                chrom(&[0, 1, 2, 3]),
                chrom(&[0, 2, 1, 3]),
            ]
        );
        let mut labels = LabelMap::new(pool.len());
        assert_eq!(labels.label_for(&pool, &chrom(&[0, 2, 3])), "C2");
        assert_eq!(labels.label_for(&pool, &chrom(&[0, 2, 1, 3])), "C4");
        // A path outside the pool gets a fresh, stable label.
        let foreign = chrom(&[0, 3]);
        assert_eq!(labels.label_for(&pool, &foreign), "C5");
        assert_eq!(labels.label_for(&pool, &foreign), "C5");
    }

    #[test]
    fn dump_format_lists_groups_ascending() {
        let topo = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let (graded, demand) = full_grade(&topo, 0, 2);
        let pool = enumerate_paths(&graded, &demand, 2).unwrap();
        assert_eq!(pool.dump(), "len=1: 0 2\nlen=2: 0 1 2\n");
    }
}
