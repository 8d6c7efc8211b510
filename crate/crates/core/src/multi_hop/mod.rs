//! Multi-hop channel pairing: bottleneck detection, randomized sub-channel
//! selection and its induced laws, the chained pairing rate and the
//! deterministic 2-2-2 pairing.

mod plan;
mod subchannel;
mod two_hop;

pub use plan::{
    build_multihop_plan, corollary2_sum_capacity, last_hop_key, theorem4_rate, theorem4_terms, MultiHopPlan,
    PlanEntry, SlotKey, Theorem4Term,
};
pub use subchannel::{
    binomial, bottleneck_law, full_rank_subpairs, fullrank_distribution, fullrank_sub_probability,
    fullrank_sub_with_sets_probability, subchannel_probability, subselect_tx_rx, subsets, HopSelection,
};
pub use two_hop::{
    classify_222, curve_222, curve_333, pairing_gain, pairing_gain_222, residual_repairing, separate_instance_gain,
    separate_instance_single_hop_rate, separate_instance_two_hop_rate, theorem3_rate_222, Case222, CurvePoint,
    PairingEntry, Theorem3Report,
};
pub(crate) use subchannel::random_subsets;

use crate::bounds::expected_rank;
use crate::gf2::Gf2Error;
use crate::network::LayeredNetwork;
use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiHopError {
    #[error("hop {hop} ({k_m}x{k_next} nodes) cannot host the {a}x{b} bottleneck in either orientation; no minimum-dimensional bottleneck hop")]
    NotMinDimensional { hop: usize, k_m: usize, k_next: usize, a: usize, b: usize },
    #[error("the scheme needs the same Bernoulli probability p on every entry of every hop")]
    HeterogeneousP,
    #[error("this result needs p = 1/2 on every entry, got {0}")]
    NotHalf(String),
    #[error("the scheme needs at least {needed} hops, got {got}")]
    TooFewHops { needed: usize, got: usize },
    #[error("expected a 2-2-2 network or 2x2 hop laws")]
    Not222,
    #[error("matrix {0} is not square, full rank and nonzero")]
    NotFullRank(crate::BitMatrix),
    #[error("matrix side {side} exceeds the smallest bottleneck dimension {k_min}")]
    TooLarge { side: usize, k_min: usize },
    #[error("subset sizes {got:?} do not match rank {rank}")]
    SubsetMismatch { rank: usize, got: (usize, usize) },
    #[error("subset {0:?} is not a valid sorted node subset of its layer")]
    BadSubset(Vec<usize>),
    #[error("hop {0} does not exist")]
    NoSuchHop(usize),
    #[error("margin {0} must lie strictly between 0 and 1")]
    Margin(Rational),
    #[error("sub-block length {0} is too small for any nonzero allocation")]
    BlockTooSmall(usize),
    #[error("need at least one effective sub-block")]
    NoBlocks,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Hop with the smallest expected rank, and whether every hop can host its
/// dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottleneckInfo {
    /// 1-based hop index.
    pub m0: usize,
    /// `(K_{m0}, K_{m0+1})`.
    pub dims: (usize, usize),
    pub is_min_dimensional: bool,
    /// `E rank(H_m)` for each hop.
    pub expected_ranks: Vec<Rational>,
}

pub fn detect_bottleneck(net: &LayeredNetwork) -> Result<BottleneckInfo, MultiHopError> {
    let expected_ranks = net.hops().iter().map(expected_rank).collect::<Result<Vec<_>, _>>()?;
    let mut m0 = 1;
    for (i, e) in expected_ranks.iter().enumerate() {
        if e < &expected_ranks[m0 - 1] {
            m0 = i + 1;
        }
    }
    let dims = (net.layer_size(m0), net.layer_size(m0 + 1));
    let is_min_dimensional = (1..=net.m()).all(|m| HopSelection::for_hop(net, m, dims).is_some());
    Ok(BottleneckInfo { m0, dims, is_min_dimensional, expected_ranks })
}

/// Bottleneck info, failing with the first hop that violates the dimension
/// condition.
pub fn require_min_dimensional(net: &LayeredNetwork) -> Result<BottleneckInfo, MultiHopError> {
    let info = detect_bottleneck(net)?;
    for m in 1..=net.m() {
        if HopSelection::for_hop(net, m, info.dims).is_none() {
            return Err(MultiHopError::NotMinDimensional {
                hop: m,
                k_m: net.layer_size(m),
                k_next: net.layer_size(m + 1),
                a: info.dims.0,
                b: info.dims.1,
            });
        }
    }
    Ok(info)
}

pub(crate) fn require_common_p(net: &LayeredNetwork) -> Result<Rational, MultiHopError> {
    net.common_p().ok_or(MultiHopError::HeterogeneousP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn bottleneck_examples() {
        let net = LayeredNetwork::uniform(&[3, 2, 2, 3], half()).unwrap();
        let info = detect_bottleneck(&net).unwrap();
        assert_eq!(info.m0, 2);
        assert_eq!(info.dims, (2, 2));
        assert!(info.is_min_dimensional);
        assert_eq!(info.expected_ranks[1], Rational::new(21, 16));
        assert!(info.expected_ranks[0] > info.expected_ranks[1]);

        for layers in [&[3, 3, 3, 3][..], &[2, 2, 2], &[3, 1, 3], &[2, 5, 2]] {
            assert!(detect_bottleneck(&LayeredNetwork::uniform(layers, half()).unwrap()).unwrap().is_min_dimensional);
        }
    }

    #[test]
    fn ties_go_to_the_first_hop() {
        let net = LayeredNetwork::uniform(&[2, 2, 2], half()).unwrap();
        assert_eq!(detect_bottleneck(&net).unwrap().m0, 1);
    }

    #[test]
    fn non_min_dimensional_network() {
        use crate::ChannelLaw;
        let law = |r, c, p: Rational| ChannelLaw::bernoulli_uniform(r, c, p).unwrap();
        let hops = vec![law(2, 2, Rational::new(1, 100)), law(2, 2, half()), law(1, 2, half()), law(2, 1, half())];
        let net = LayeredNetwork::new(vec![2, 2, 2, 1, 2], hops).unwrap();
        let info = detect_bottleneck(&net).unwrap();
        assert_eq!((info.m0, info.dims), (1, (2, 2)));
        assert!(!info.is_min_dimensional);
        assert!(matches!(require_min_dimensional(&net), Err(MultiHopError::NotMinDimensional { hop: 3, .. })));
    }
}
