//! QoS grading: node delay computation and threshold filtering that produces
//! the graded subgraph the GA searches.

use serde::Serialize;

use crate::error::GradingError;
use crate::scalar::Scalar;
use crate::topology::{Demand, NodeId, Topology};

/// Admission thresholds. A node is admitted when its delay, jitter and loss
/// are all *strictly below* the respective threshold; equality excludes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QosThresholds<S: Scalar = f64> {
    /// Maximum node delay in seconds.
    pub delay_max: S,
    /// Maximum jitter in milliseconds.
    pub jitter_max: S,
    /// Maximum loss fraction in (0, 1].
    pub loss_max: S,
}

impl<S: Scalar> QosThresholds<S> {
    pub fn new(delay_max: S, jitter_max: S, loss_max: S) -> Self {
        QosThresholds {
            delay_max,
            jitter_max,
            loss_max,
        }
    }

    pub fn validate(&self) -> Result<(), GradingError> {
        if self.delay_max <= S::zero() || self.jitter_max <= S::zero() || self.loss_max <= S::zero()
        {
            return Err(GradingError::InvalidThresholds(
                "all thresholds must be strictly positive".into(),
            ));
        }
        if self.loss_max > S::one() {
            return Err(GradingError::InvalidThresholds(format!(
                "loss_max must lie in (0, 1], got {}",
                self.loss_max
            )));
        }
        Ok(())
    }
}

impl<S: Scalar> Default for QosThresholds<S> {
    fn default() -> Self {
        let s = S::from_f64_lossy;
        QosThresholds::new(s(0.01), s(9.0), s(0.045))
    }
}

/// Node delay for a message: message size divided by node bandwidth.
/// Propagation, transmission and processing delay are deliberately excluded.
pub fn node_delay<S: Scalar>(message_size: S, node_bandwidth: S) -> Result<S, GradingError> {
    if node_bandwidth <= S::zero() {
        return Err(GradingError::NonPositiveBandwidth);
    }
    Ok(message_size / node_bandwidth)
}

/// The subgraph induced by the admitted nodes, plus the demand endpoints
/// (which are always admitted). Owns its induced adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSubgraph<S: Scalar = f64> {
    source: NodeId,
    destination: NodeId,
    admitted: Vec<bool>,
    adjacency: Vec<Vec<NodeId>>,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> GradedSubgraph<S> {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn node_count(&self) -> usize {
        self.admitted.len()
    }

    pub fn is_admitted(&self, id: NodeId) -> bool {
        id.0 < self.admitted.len() && self.admitted[id.0]
    }

    /// Admitted node ids in ascending order.
    pub fn admitted_nodes(&self) -> Vec<NodeId> {
        self.admitted
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    /// Neighbors of an admitted node within the induced subgraph, ascending.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id.0]
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.is_admitted(u) && self.is_admitted(v) && self.adjacency[u.0].binary_search(&v).is_ok()
    }

    /// Number of induced links.
    pub fn link_count(&self) -> usize {
        self.adjacency.iter().map(|n| n.len()).sum::<usize>() / 2
    }
}

/// Filters a topology against the thresholds for the given demand.
///
/// Admission is the conjunction of the three strict comparisons, evaluated
/// with the demand's message size; the demand endpoints are admitted
/// unconditionally. Pure: identical inputs give identical subgraphs.
pub fn grade_nodes<S: Scalar>(
    topo: &Topology<S>,
    thresholds: &QosThresholds<S>,
    demand: &Demand<S>,
) -> GradedSubgraph<S> {
    let n = topo.node_count();
    let mut admitted = vec![false; n];
    for (i, q) in topo.nodes().iter().enumerate() {
        let delay = demand.message_size / q.bandwidth;
        admitted[i] = delay < thresholds.delay_max
            && q.jitter < thresholds.jitter_max
            && q.loss < thresholds.loss_max;
    }
    admitted[demand.source.0] = true;
    admitted[demand.destination.0] = true;

    let mut adjacency = vec![Vec::new(); n];
    for (i, slot) in adjacency.iter_mut().enumerate() {
        if admitted[i] {
            slot.extend(
                topo.neighbors(NodeId(i))
                    .iter()
                    .copied()
                    .filter(|w| admitted[w.0]),
            );
        }
    }
    GradedSubgraph {
        source: demand.source,
        destination: demand.destination,
        admitted,
        adjacency,
        _marker: std::marker::PhantomData,
    }
}
