//! Layered network topology, per-hop channel laws and cut machinery.

mod config;
mod cut;
mod law;

pub use config::{load_config, parse_config, ConfigError};
pub use cut::{cut_channel_law, cut_sets, enumerate_cuts, Cut, CutSets, MAX_CUT_NODES};
pub use law::{ChannelLaw, LawBlock, LawError};

use crate::rational::Rational;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("a network needs at least two layers")]
    TooFewLayers,
    #[error("layer {0} has size zero")]
    EmptyLayer(usize),
    #[error("first layer has {first} nodes but last layer has {last}")]
    UnmatchedPairs { first: usize, last: usize },
    #[error("expected {expected} hop laws, got {got}")]
    HopCount { expected: usize, got: usize },
    #[error("hop {hop} law is {got:?}, expected {expected:?}")]
    HopDimensions { hop: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("nodes {from} and {to} are not in adjacent layers")]
    NotAdjacent { from: NodeId, to: NodeId },
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("cut has no crossing channel (empty source or destination side)")]
    EmptyCut,
    #[error("network has {nodes} nodes; exhaustive cut enumeration is limited to {MAX_CUT_NODES}")]
    CutCapExceeded { nodes: usize },
    #[error(transparent)]
    Law(#[from] LawError),
}

/// Node `v_{k,m}`: the `k`-th node of layer `m`, both 1-based.
/// Ordered by layer first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub m: usize,
    pub k: usize,
}

impl NodeId {
    pub fn new(k: usize, m: usize) -> Self {
        Self { m, k }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{},{}", self.k, self.m)
    }
}

/// Layers `K_1..K_{M+1}` with one channel law per hop. Hop `m` maps layer `m`
/// to layer `m+1` and its law is `K_{m+1} x K_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredNetwork {
    layers: Vec<usize>,
    hops: Vec<ChannelLaw>,
}

impl LayeredNetwork {
    pub fn new(layers: Vec<usize>, hops: Vec<ChannelLaw>) -> Result<Self, NetworkError> {
        if layers.len() < 2 {
            return Err(NetworkError::TooFewLayers);
        }
        if let Some(i) = layers.iter().position(|&k| k == 0) {
            return Err(NetworkError::EmptyLayer(i + 1));
        }
        let (first, last) = (layers[0], *layers.last().unwrap());
        if first != last {
            return Err(NetworkError::UnmatchedPairs { first, last });
        }
        if hops.len() != layers.len() - 1 {
            return Err(NetworkError::HopCount { expected: layers.len() - 1, got: hops.len() });
        }
        for (m, law) in hops.iter().enumerate() {
            let expected = (layers[m + 1], layers[m]);
            if law.dims() != expected {
                return Err(NetworkError::HopDimensions { hop: m + 1, expected, got: law.dims() });
            }
        }
        Ok(Self { layers, hops })
    }

    /// Every hop Bernoulli with the same entry probability `p`.
    pub fn uniform(layers: &[usize], p: Rational) -> Result<Self, NetworkError> {
        let hops = layers
            .windows(2)
            .map(|w| ChannelLaw::bernoulli_uniform(w[1], w[0], p.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(layers.to_vec(), hops)
    }

    /// Number of source-destination pairs.
    pub fn k(&self) -> usize {
        self.layers[0]
    }

    /// Number of hops.
    pub fn m(&self) -> usize {
        self.hops.len()
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// `K_m`, 1-based.
    pub fn layer_size(&self, m: usize) -> usize {
        self.layers[m - 1]
    }

    /// Law of hop `m`, 1-based.
    pub fn hop(&self, m: usize) -> &ChannelLaw {
        &self.hops[m - 1]
    }

    pub fn hops(&self) -> &[ChannelLaw] {
        &self.hops
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().sum()
    }

    /// All nodes, layer by layer.
    pub fn nodes(&self) -> Vec<NodeId> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(m, &size)| (1..=size).map(move |k| NodeId::new(k, m + 1)))
            .collect()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.m >= 1 && v.m <= self.layers.len() && v.k >= 1 && v.k <= self.layers[v.m - 1]
    }

    /// True when every hop law is Bernoulli with one shared `p`.
    pub fn common_p(&self) -> Option<Rational> {
        let p = self.hops[0].common_p()?;
        self.hops.iter().all(|h| h.common_p().as_ref() == Some(&p)).then_some(p)
    }

    /// Edge `from -> to` exists when the corresponding entry is one with
    /// positive probability.
    pub fn edge_exists(&self, from: NodeId, to: NodeId) -> Result<bool, NetworkError> {
        for v in [from, to] {
            if !self.contains(v) {
                return Err(NetworkError::UnknownNode(v));
            }
        }
        if to.m != from.m + 1 {
            return Err(NetworkError::NotAdjacent { from, to });
        }
        Ok(self.has_edge(from, to))
    }

    pub(crate) fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        to.m == from.m + 1 && !self.hops[from.m - 1].marginal(to.k - 1, from.k - 1).is_zero()
    }

    /// Nodes of the next layer that `v` has an edge into.
    pub(crate) fn successors(&self, v: NodeId) -> Vec<NodeId> {
        if v.m >= self.layers.len() {
            return Vec::new();
        }
        (1..=self.layers[v.m]).map(|k| NodeId::new(k, v.m + 1)).filter(|&w| self.has_edge(v, w)).collect()
    }

    /// Nodes of the previous layer with an edge into `v`.
    pub(crate) fn predecessors(&self, v: NodeId) -> Vec<NodeId> {
        if v.m <= 1 {
            return Vec::new();
        }
        (1..=self.layers[v.m - 2]).map(|k| NodeId::new(k, v.m - 1)).filter(|&u| self.has_edge(u, v)).collect()
    }
}
