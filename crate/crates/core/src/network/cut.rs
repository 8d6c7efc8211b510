//! Cuts and the node sets they induce.

use super::{ChannelLaw, LawBlock, LayeredNetwork, NetworkError, NodeId};
use std::collections::{BTreeSet, VecDeque};

/// Largest network, in nodes, for which all cuts may be enumerated.
pub const MAX_CUT_NODES: usize = 20;

/// A node set `Ω` holding at least one source whose destination lies outside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    members: BTreeSet<NodeId>,
}

impl Cut {
    pub fn new(net: &LayeredNetwork, members: impl IntoIterator<Item = NodeId>) -> Result<Self, NetworkError> {
        let members: BTreeSet<NodeId> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| !net.contains(v)) {
            return Err(NetworkError::UnknownNode(v));
        }
        let cut = Self { members };
        if cut.pairs(net).is_empty() {
            return Err(NetworkError::InvalidCut("no source in the cut has its destination outside".into()));
        }
        Ok(cut)
    }

    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }

    fn pairs(&self, net: &LayeredNetwork) -> BTreeSet<usize> {
        let last = net.layers().len();
        (1..=net.k())
            .filter(|&k| self.contains(NodeId::new(k, 1)) && !self.contains(NodeId::new(k, last)))
            .collect()
    }
}

/// Sets induced by a cut. Node sets are ordered by layer, then index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSets {
    /// Pairs `k` with source inside and destination outside.
    pub k_omega: BTreeSet<usize>,
    pub s_omega: BTreeSet<NodeId>,
    pub d_omega: BTreeSet<NodeId>,
    /// Nodes of the cut reachable from `s_omega`.
    pub omega_prime: BTreeSet<NodeId>,
    /// Transmitting side of the cut channel.
    pub omega_s: BTreeSet<NodeId>,
    /// Receiving side of the cut channel.
    pub omega_d: BTreeSet<NodeId>,
}

pub fn cut_sets(net: &LayeredNetwork, cut: &Cut) -> CutSets {
    let last = net.layers().len();
    let k_omega = cut.pairs(net);
    let s_omega: BTreeSet<NodeId> = k_omega.iter().map(|&k| NodeId::new(k, 1)).collect();
    let d_omega: BTreeSet<NodeId> = k_omega.iter().map(|&k| NodeId::new(k, last)).collect();

    // Nodes outside the cut that reach some destination in D_Ω using only
    // edges between nodes outside the cut.
    let mut reaches_dest: BTreeSet<NodeId> = d_omega.clone();
    let mut queue: VecDeque<NodeId> = d_omega.iter().copied().collect();
    while let Some(w) = queue.pop_front() {
        for u in net.predecessors(w) {
            if !cut.contains(u) && reaches_dest.insert(u) {
                queue.push_back(u);
            }
        }
    }
    let omega_d: BTreeSet<NodeId> = reaches_dest
        .into_iter()
        .filter(|&v| net.predecessors(v).iter().any(|&u| cut.contains(u)))
        .collect();

    let mut reached: BTreeSet<NodeId> = s_omega.clone();
    let mut queue: VecDeque<NodeId> = s_omega.iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        for w in net.successors(u) {
            if reached.insert(w) {
                queue.push_back(w);
            }
        }
    }
    let omega_prime: BTreeSet<NodeId> = reached.into_iter().filter(|&v| cut.contains(v)).collect();
    let omega_s: BTreeSet<NodeId> = omega_prime
        .iter()
        .copied()
        .filter(|&v| net.successors(v).iter().any(|w| omega_d.contains(w)))
        .collect();

    CutSets { k_omega, s_omega, d_omega, omega_prime, omega_s, omega_d }
}

/// Law of the `|Ω_D| x |Ω_S|` cut matrix. Rows follow `omega_d` order and
/// columns follow `omega_s` order; entries between non-adjacent layers are zero.
pub fn cut_channel_law(net: &LayeredNetwork, cut: &Cut) -> Result<ChannelLaw, NetworkError> {
    let sets = cut_sets(net, cut);
    cut_law_from_sets(net, &sets)
}

pub(crate) fn cut_law_from_sets(net: &LayeredNetwork, sets: &CutSets) -> Result<ChannelLaw, NetworkError> {
    if sets.omega_s.is_empty() || sets.omega_d.is_empty() {
        return Err(NetworkError::EmptyCut);
    }
    let tx: Vec<NodeId> = sets.omega_s.iter().copied().collect();
    let rx: Vec<NodeId> = sets.omega_d.iter().copied().collect();
    let mut blocks = Vec::new();
    for m in 1..=net.m() {
        let col_pos: Vec<usize> = (0..tx.len()).filter(|&c| tx[c].m == m).collect();
        let row_pos: Vec<usize> = (0..rx.len()).filter(|&r| rx[r].m == m + 1).collect();
        if col_pos.is_empty() || row_pos.is_empty() {
            continue;
        }
        let rows: Vec<usize> = row_pos.iter().map(|&r| rx[r].k - 1).collect();
        let cols: Vec<usize> = col_pos.iter().map(|&c| tx[c].k - 1).collect();
        let law = net.hop(m).restrict(&rows, &cols)?;
        blocks.push(LawBlock { law, row_pos, col_pos });
    }
    Ok(ChannelLaw::assemble(rx.len(), tx.len(), &blocks)?)
}

/// Every valid cut, in increasing order of the membership bitmask over
/// [`LayeredNetwork::nodes`].
pub fn enumerate_cuts(net: &LayeredNetwork) -> Result<Vec<Cut>, NetworkError> {
    let nodes = net.nodes();
    if nodes.len() > MAX_CUT_NODES {
        return Err(NetworkError::CutCapExceeded { nodes: nodes.len() });
    }
    let last = net.layers().len();
    let src_bit = |k: usize| nodes.iter().position(|&v| v == NodeId::new(k, 1)).unwrap();
    let dst_bit = |k: usize| nodes.iter().position(|&v| v == NodeId::new(k, last)).unwrap();
    let pairs: Vec<(usize, usize)> = (1..=net.k()).map(|k| (src_bit(k), dst_bit(k))).collect();
    let mut cuts = Vec::new();
    for mask in 0u32..(1u32 << nodes.len()) {
        let valid = pairs.iter().any(|&(s, d)| mask >> s & 1 == 1 && mask >> d & 1 == 0);
        if valid {
            let members = (0..nodes.len()).filter(|&b| mask >> b & 1 == 1).map(|b| nodes[b]).collect();
            cuts.push(Cut { members });
        }
    }
    Ok(cuts)
}
