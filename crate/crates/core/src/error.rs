//! Error types for the routing engine.

use thiserror::Error;

/// Errors raised while parsing, constructing or generating a topology.
#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop link on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: duplicate link between nodes {a} and {b}")]
    DuplicateLink { line: usize, a: usize, b: usize },
    #[error("line {line}: node id {node} out of range (node count {count})")]
    NodeOutOfRange {
        line: usize,
        node: usize,
        count: usize,
    },
    #[error("line {line}: {msg}")]
    InvalidAttribute { line: usize, msg: String },
    #[error("graph is disconnected: node {node} is unreachable from node 0")]
    Disconnected { node: usize },
    #[error("topology needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("density must lie in (0, 1], got {0}")]
    InvalidDensity(f64),
    #[error("invalid demand: {0}")]
    InvalidDemand(String),
}

/// Errors raised by grading computations.
#[derive(Debug, Error, PartialEq)]
pub enum GradingError {
    #[error("node bandwidth must be positive to compute delay")]
    NonPositiveBandwidth,
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
}

/// Errors raised by path enumeration and the GA engine.
#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error("no route: {0}")]
    NoRoute(String),
    #[error("roulette wheel is degenerate: all weights are zero")]
    DegenerateWheel,
}

/// Errors raised by GA configuration validation.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid GA configuration: {0}")]
    Invalid(String),
}

/// Errors raised by the route knowledge base.
#[derive(Debug, Error)]
pub enum KbError {
    #[error("knowledge base I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("refusing to store an infeasible route (bottleneck must be positive)")]
    InfeasibleRoute,
}
