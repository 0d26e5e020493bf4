//! Network graph model: nodes with QoS attributes, undirected links with
//! utilities, a line-oriented text format, and a seeded random generator.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::TopologyError;
use crate::scalar::Scalar;

/// Index of a node inside its topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Per-node QoS attributes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeQoS<S: Scalar = f64> {
    /// Node bandwidth in bits/second; strictly positive.
    pub bandwidth: S,
    /// Jitter in milliseconds; non-negative.
    pub jitter: S,
    /// Packet loss as a fraction in [0, 1].
    pub loss: S,
}

impl<S: Scalar> NodeQoS<S> {
    fn check(&self) -> Result<(), String> {
        if self.bandwidth <= S::zero() {
            return Err(format!("node bandwidth must be positive, got {}", self.bandwidth));
        }
        if self.jitter < S::zero() {
            return Err(format!("jitter must be non-negative, got {}", self.jitter));
        }
        if self.loss < S::zero() || self.loss > S::one() {
            return Err(format!("loss must lie in [0, 1], got {}", self.loss));
        }
        Ok(())
    }
}

/// Undirected link between two distinct nodes, carrying a utility in
/// bits/second. Endpoints are stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link<S: Scalar = f64> {
    pub a: NodeId,
    pub b: NodeId,
    pub utility: S,
}

impl<S: Scalar> Link<S> {
    pub fn new(u: NodeId, v: NodeId, utility: S) -> Self {
        let (a, b) = if u.0 <= v.0 { (u, v) } else { (v, u) };
        Link { a, b, utility }
    }
}

/// A routing request: where from, where to, how much bandwidth, and the
/// message size used for delay grading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Demand<S: Scalar = f64> {
    pub source: NodeId,
    pub destination: NodeId,
    /// Bandwidth the data needs, bits/second; strictly positive.
    pub required_bandwidth: S,
    /// Message size in bits; strictly positive.
    pub message_size: S,
}

impl<S: Scalar> Demand<S> {
    pub fn new(source: NodeId, destination: NodeId, required_bandwidth: S, message_size: S) -> Self {
        Demand {
            source,
            destination,
            required_bandwidth,
            message_size,
        }
    }

    /// Checks the demand against a topology: endpoints valid and distinct,
    /// quantities positive.
    pub fn validate(&self, topo: &Topology<S>) -> Result<(), TopologyError> {
        let n = topo.node_count();
        if self.source.0 >= n || self.destination.0 >= n {
            return Err(TopologyError::InvalidDemand(format!(
                "endpoint out of range: source {} destination {} (node count {})",
                self.source, self.destination, n
            )));
        }
        if self.source == self.destination {
            return Err(TopologyError::InvalidDemand(
                "source and destination must differ".into(),
            ));
        }
        if self.required_bandwidth <= S::zero() {
            return Err(TopologyError::InvalidDemand(
                "required bandwidth must be positive".into(),
            ));
        }
        if self.message_size <= S::zero() {
            return Err(TopologyError::InvalidDemand(
                "message size must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Available bandwidth a link offers to a demand: link utility minus the
/// demanded bandwidth. The link can participate in a route only when the
/// result is strictly positive.
pub fn available_bandwidth<S: Scalar>(link: &Link<S>, demand: &Demand<S>) -> S {
    link.utility - demand.required_bandwidth
}

/// Connected, self-loop-free undirected graph with QoS-attributed nodes and
/// utility-attributed links. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Topology<S: Scalar = f64> {
    nodes: Vec<NodeQoS<S>>,
    links: Vec<Link<S>>,
    #[serde(skip)]
    adjacency: Vec<Vec<NodeId>>,
    #[serde(skip)]
    link_index: BTreeMap<(usize, usize), usize>,
}

impl<S: Scalar> Topology<S> {
    /// Builds a topology, enforcing: no self-loops, no parallel links,
    /// endpoints in range, valid QoS attributes, non-negative utilities,
    /// and connectivity.
    pub fn new(nodes: Vec<NodeQoS<S>>, links: Vec<Link<S>>) -> Result<Self, TopologyError> {
        if nodes.len() < 2 {
            return Err(TopologyError::TooFewNodes(nodes.len()));
        }
        for (i, q) in nodes.iter().enumerate() {
            q.check().map_err(|msg| TopologyError::InvalidAttribute {
                line: 0,
                msg: format!("node {i}: {msg}"),
            })?;
        }
        let n = nodes.len();
        let mut link_index = BTreeMap::new();
        let mut normalized = Vec::with_capacity(links.len());
        for link in links {
            let link = Link::new(link.a, link.b, link.utility);
            if link.a == link.b {
                return Err(TopologyError::SelfLoop {
                    line: 0,
                    node: link.a.0,
                });
            }
            if link.b.0 >= n {
                return Err(TopologyError::NodeOutOfRange {
                    line: 0,
                    node: link.b.0,
                    count: n,
                });
            }
            if link.utility < S::zero() {
                return Err(TopologyError::InvalidAttribute {
                    line: 0,
                    msg: format!("link {} {}: utility must be non-negative", link.a, link.b),
                });
            }
            if link_index.insert((link.a.0, link.b.0), normalized.len()).is_some() {
                return Err(TopologyError::DuplicateLink {
                    line: 0,
                    a: link.a.0,
                    b: link.b.0,
                });
            }
            normalized.push(link);
        }
        let mut adjacency = vec![Vec::new(); n];
        for link in &normalized {
            adjacency[link.a.0].push(link.b);
            adjacency[link.b.0].push(link.a);
        }
        for neighbors in &mut adjacency {
            neighbors.sort();
        }
        let topo = Topology {
            nodes,
            links: normalized,
            adjacency,
            link_index,
        };
        if let Some(unreachable) = topo.first_unreachable() {
            return Err(TopologyError::Disconnected { node: unreachable });
        }
        Ok(topo)
    }

    /// Breadth-first reachability from node 0; returns the smallest
    /// unreachable node id, if any.
    fn first_unreachable(&self) -> Option<usize> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(NodeId(0));
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[NodeQoS<S>] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &NodeQoS<S> {
        &self.nodes[id.0]
    }

    pub fn links(&self) -> &[Link<S>] {
        &self.links
    }

    /// Neighbors of a node in ascending id order.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id.0]
    }

    /// Utility of the link between two nodes, if one exists.
    pub fn utility_between(&self, u: NodeId, v: NodeId) -> Option<S> {
        let key = if u.0 <= v.0 { (u.0, v.0) } else { (v.0, u.0) };
        self.link_index.get(&key).map(|&i| self.links[i].utility)
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.utility_between(u, v).is_some()
    }

    /// Canonical text form; `parse` reads it back to an equal topology.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("nodes {}\n", self.node_count()));
        for (i, q) in self.nodes.iter().enumerate() {
            out.push_str(&format!("node {} {} {} {}\n", i, q.bandwidth, q.jitter, q.loss));
        }
        out.push_str(&format!("links {}\n", self.links.len()));
        for link in &self.links {
            out.push_str(&format!("link {} {} {}\n", link.a, link.b, link.utility));
        }
        out
    }

    /// Parses the line-oriented topology format:
    ///
    /// ```text
    /// nodes <n>
    /// node <id> <bandwidth_bps> <jitter_ms> <loss_frac>   (n lines, ids 0..n-1 in order)
    /// links <m>
    /// link <u> <v> <utility_bps>                          (m lines)
    /// ```
    ///
    /// `#` begins a comment line; blank lines are ignored; fields are
    /// whitespace-separated decimal literals. Errors name the offending line.
    pub fn parse(text: &str) -> Result<Self, TopologyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, n) = expect_count(lines.next(), "nodes")?;
        if n < 2 {
            return Err(TopologyError::Parse {
                line,
                msg: format!("node count must be at least 2, got {n}"),
            });
        }

        let mut nodes = Vec::with_capacity(n);
        for expected_id in 0..n {
            let (line, tokens) = expect_tokens(lines.next(), "node", 5)?;
            let id: usize = parse_field(line, tokens[1], "node id")?;
            if id != expected_id {
                return Err(TopologyError::Parse {
                    line,
                    msg: format!("expected node {expected_id} (ids must appear in order), got {id}"),
                });
            }
            let qos = NodeQoS {
                bandwidth: parse_scalar(line, tokens[2], "bandwidth")?,
                jitter: parse_scalar(line, tokens[3], "jitter")?,
                loss: parse_scalar(line, tokens[4], "loss")?,
            };
            qos.check()
                .map_err(|msg| TopologyError::InvalidAttribute { line, msg })?;
            nodes.push(qos);
        }

        let (_, m) = expect_count(lines.next(), "links")?;
        let mut links = Vec::with_capacity(m);
        let mut seen = BTreeMap::new();
        for _ in 0..m {
            let (line, tokens) = expect_tokens(lines.next(), "link", 4)?;
            let u: usize = parse_field(line, tokens[1], "link endpoint")?;
            let v: usize = parse_field(line, tokens[2], "link endpoint")?;
            let utility: S = parse_scalar(line, tokens[3], "utility")?;
            if u == v {
                return Err(TopologyError::SelfLoop { line, node: u });
            }
            for &e in &[u, v] {
                if e >= n {
                    return Err(TopologyError::NodeOutOfRange {
                        line,
                        node: e,
                        count: n,
                    });
                }
            }
            if utility < S::zero() {
                return Err(TopologyError::InvalidAttribute {
                    line,
                    msg: format!("link {u} {v}: utility must be non-negative"),
                });
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, line).is_some() {
                return Err(TopologyError::DuplicateLink {
                    line,
                    a: key.0,
                    b: key.1,
                });
            }
            links.push(Link::new(NodeId(u), NodeId(v), utility));
        }

        if let Some((line, _)) = lines.next() {
            return Err(TopologyError::Parse {
                line,
                msg: "unexpected content after link list".into(),
            });
        }
        Topology::new(nodes, links)
    }
}

fn expect_count(
    item: Option<(usize, &str)>,
    keyword: &str,
) -> Result<(usize, usize), TopologyError> {
    let (line, text) = item.ok_or(TopologyError::Parse {
        line: 0,
        msg: format!("unexpected end of file, expected `{keyword} <count>`"),
    })?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != keyword {
        return Err(TopologyError::Parse {
            line,
            msg: format!("expected `{keyword} <count>`, got `{text}`"),
        });
    }
    let count = parse_field(line, tokens[1], "count")?;
    Ok((line, count))
}

fn expect_tokens<'a>(
    item: Option<(usize, &'a str)>,
    keyword: &str,
    arity: usize,
) -> Result<(usize, Vec<&'a str>), TopologyError> {
    let (line, text) = item.ok_or(TopologyError::Parse {
        line: 0,
        msg: format!("unexpected end of file, expected a `{keyword}` line"),
    })?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != arity || tokens[0] != keyword {
        return Err(TopologyError::Parse {
            line,
            msg: format!("expected `{keyword}` line with {} fields, got `{text}`", arity - 1),
        });
    }
    Ok((line, tokens))
}

fn parse_field(line: usize, token: &str, what: &str) -> Result<usize, TopologyError> {
    token.parse().map_err(|_| TopologyError::Parse {
        line,
        msg: format!("invalid {what} `{token}`"),
    })
}

fn parse_scalar<S: Scalar>(line: usize, token: &str, what: &str) -> Result<S, TopologyError> {
    token.parse::<S>().map_err(|e| TopologyError::Parse {
        line,
        msg: format!("invalid {what} `{token}`: {e}"),
    })
}

/// Uniform ranges the random generator draws QoS attributes and link
/// utilities from.
#[derive(Debug, Clone, PartialEq)]
pub struct QosRanges<S: Scalar = f64> {
    pub bandwidth: (S, S),
    pub jitter: (S, S),
    pub loss: (S, S),
    pub utility: (S, S),
}

impl<S: Scalar> Default for QosRanges<S> {
    fn default() -> Self {
        let s = S::from_f64_lossy;
        QosRanges {
            bandwidth: (s(1.0e6), s(1.0e7)),
            jitter: (s(0.0), s(10.0)),
            loss: (s(0.0), s(0.05)),
            utility: (s(50.0), s(150.0)),
        }
    }
}

fn draw<S: Scalar, R: Rng>(rng: &mut R, range: (S, S)) -> S {
    let (lo, hi) = (range.0.to_f64_lossy(), range.1.to_f64_lossy());
    S::from_f64_lossy(lo + rng.random::<f64>() * (hi - lo))
}

/// Generates a connected random topology with `n` nodes.
///
/// A random spanning tree guarantees connectivity; every other node pair is
/// linked with probability `density`. QoS attributes and utilities are drawn
/// uniformly from `ranges`. Identical `(n, density, seed, ranges)` produce
/// bit-identical output.
pub fn generate_random_topology<S: Scalar>(
    n: usize,
    density: f64,
    seed: u64,
    ranges: &QosRanges<S>,
) -> Result<Topology<S>, TopologyError> {
    if n < 2 {
        return Err(TopologyError::TooFewNodes(n));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(TopologyError::InvalidDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let nodes: Vec<NodeQoS<S>> = (0..n)
        .map(|_| NodeQoS {
            bandwidth: draw(&mut rng, ranges.bandwidth),
            jitter: draw(&mut rng, ranges.jitter),
            loss: draw(&mut rng, ranges.loss),
        })
        .collect();

    // Random recursive tree: each node attaches to an earlier one.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        let parent = rng.random_range(0..i);
        pairs.push((parent.min(i), parent.max(i)));
    }
    pairs.sort_unstable();
    let tree: std::collections::BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if !tree.contains(&(i, j)) && rng.random::<f64>() < density {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let links: Vec<Link<S>> = pairs
        .into_iter()
        .map(|(a, b)| Link::new(NodeId(a), NodeId(b), draw(&mut rng, ranges.utility)))
        .collect();

    Topology::new(nodes, links)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qos(bw: f64) -> NodeQoS<f64> {
        NodeQoS {
            bandwidth: bw,
            jitter: 1.0,
            loss: 0.01,
        }
    }

    fn triangle_text() -> &'static str {
        "# a 3-node triangle\n\
         nodes 3\n\
         node 0 1000.0 1.0 0.01\n\
         node 1 1000.0 1.0 0.01\n\
         node 2 1000.0 1.0 0.01\n\
         links 3\n\
         link 0 1 10.0\n\
         link 1 2 10.0\n\
         link 0 2 10.0\n"
    }

    #[test]
    fn parses_triangle() {
        let topo: Topology<f64> = Topology::parse(triangle_text()).unwrap();
        assert_eq!(topo.node_count(), 3);
        assert_eq!(topo.links().len(), 3);
        assert_eq!(topo.utility_between(NodeId(0), NodeId(2)), Some(10.0));
        assert_eq!(topo.neighbors(NodeId(0)), &[NodeId(1), NodeId(2)]);
    }

    #[test]
    fn self_loop_is_a_parse_error_naming_the_line() {
        let text = "nodes 3\n\
                    node 0 1000.0 1.0 0.01\n\
                    node 1 1000.0 1.0 0.01\n\
                    node 2 1000.0 1.0 0.01\n\
                    links 2\n\
                    link 0 1 10.0\n\
                    link 2 2 5.0\n";
        let err = Topology::<f64>::parse(text).unwrap_err();
        assert_eq!(err, TopologyError::SelfLoop { line: 7, node: 2 });
    }

    #[test]
    fn duplicate_link_is_rejected() {
        let text = "nodes 2\n\
                    node 0 1000.0 1.0 0.01\n\
                    node 1 1000.0 1.0 0.01\n\
                    links 2\n\
                    link 0 1 10.0\n\
                    link 1 0 4.0\n";
        let err = Topology::<f64>::parse(text).unwrap_err();
        assert_eq!(err, TopologyError::DuplicateLink { line: 6, a: 0, b: 1 });
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let text = "nodes 4\n\
                    node 0 1000.0 1.0 0.01\n\
                    node 1 1000.0 1.0 0.01\n\
                    node 2 1000.0 1.0 0.01\n\
                    node 3 1000.0 1.0 0.01\n\
                    links 2\n\
                    link 0 1 10.0\n\
                    link 2 3 10.0\n";
        let err = Topology::<f64>::parse(text).unwrap_err();
        assert_eq!(err, TopologyError::Disconnected { node: 2 });
    }

    #[test]
    fn malformed_line_names_the_line() {
        let text = "nodes 2\n\
                    node 0 1000.0 1.0 0.01\n\
                    node 1 1000.0 abc 0.01\n\
                    links 1\n\
                    link 0 1 10.0\n";
        match Topology::<f64>::parse(text).unwrap_err() {
            TopologyError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn file_roundtrip_is_exact() {
        let topo: Topology<f64> =
            generate_random_topology(8, 0.5, 42, &QosRanges::default()).unwrap();
        let text = topo.to_file_string();
        let reparsed = Topology::parse(&text).unwrap();
        assert_eq!(topo, reparsed);
        assert_eq!(text, reparsed.to_file_string());
    }

    #[test]
    fn available_bandwidth_matches_definition() {
        let demand = Demand::new(NodeId(0), NodeId(1), 4.0, 1000.0);
        let link = |u: f64| Link::new(NodeId(0), NodeId(1), u);
        assert_eq!(available_bandwidth(&link(10.0), &demand), 6.0);
        assert_eq!(available_bandwidth(&link(4.0), &demand), 0.0);
        assert_eq!(available_bandwidth(&link(3.0), &demand), -1.0);
    }

    #[test]
    fn two_node_generation_yields_single_link() {
        let topo: Topology<f64> =
            generate_random_topology(2, 1.0, 7, &QosRanges::default()).unwrap();
        assert_eq!(topo.node_count(), 2);
        assert_eq!(topo.links().len(), 1);
    }

    #[test]
    fn generation_is_deterministic() {
        let a: Topology<f64> = generate_random_topology(10, 0.4, 1, &QosRanges::default()).unwrap();
        let b: Topology<f64> = generate_random_topology(10, 0.4, 1, &QosRanges::default()).unwrap();
        assert_eq!(a, b);
        let c: Topology<f64> = generate_random_topology(10, 0.4, 2, &QosRanges::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn hundred_seeds_all_connected() {
        for seed in 1..=100u64 {
            let topo: Topology<f64> =
                generate_random_topology(10, 0.4, seed, &QosRanges::default()).unwrap();
            // Topology::new already runs the connectivity check; re-verify
            // with an independent reachability scan.
            let mut seen = vec![false; topo.node_count()];
            let mut stack = vec![NodeId(0)];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in topo.neighbors(v) {
                    if !seen[w.0] {
                        seen[w.0] = true;
                        stack.push(w);
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "seed {seed} produced a disconnected graph");
        }
    }

    #[test]
    fn invalid_construction_inputs_are_rejected() {
        assert!(Topology::new(vec![qos(1000.0)], vec![]).is_err());
        let nodes = vec![qos(1000.0), qos(1000.0)];
        let bad_loss = vec![
            NodeQoS {
                bandwidth: 1000.0,
                jitter: 1.0,
                loss: 1.5,
            },
            qos(1000.0),
        ];
        assert!(Topology::new(bad_loss, vec![Link::new(NodeId(0), NodeId(1), 1.0)]).is_err());
        assert!(matches!(
            generate_random_topology::<f64>(1, 0.5, 0, &QosRanges::default()),
            Err(TopologyError::TooFewNodes(1))
        ));
        assert!(matches!(
            generate_random_topology::<f64>(5, 0.0, 0, &QosRanges::default()),
            Err(TopologyError::InvalidDensity(_))
        ));
        let demand = Demand::new(NodeId(0), NodeId(0), 1.0, 1.0);
        let topo = Topology::new(nodes, vec![Link::new(NodeId(0), NodeId(1), 1.0)]).unwrap();
        assert!(demand.validate(&topo).is_err());
    }

    #[test]
    fn works_with_f32_scalars() {
        let topo: Topology<f32> =
            generate_random_topology(6, 0.5, 3, &QosRanges::default()).unwrap();
        let text = topo.to_file_string();
        assert_eq!(Topology::<f32>::parse(&text).unwrap(), topo);
    }
}
