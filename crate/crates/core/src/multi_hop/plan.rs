//! Chained pairing across hops: hops `1..M-1` use sub-channel `G`, the last
//! hop uses `(G^{M-1})^{-1}`, so the end-to-end map of every packet is `I`.

use super::subchannel::{binomial, fullrank_distribution, subsets, HopSelection};
use super::{require_common_p, require_min_dimensional, MultiHopError};
use crate::gf2::{count_rank, BitMatrix};
use crate::network::LayeredNetwork;
use crate::rational::Rational;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

/// `(G^{M-1})^{-1}` for full-rank `g`.
pub fn last_hop_key(g: &BitMatrix, hops: usize) -> BitMatrix {
    g.power(hops - 1)
        .expect("square")
        .inverse()
        .expect("square")
        .expect("powers of a full-rank matrix are invertible")
}

/// One term of the pairing sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem4Term {
    pub g: BitMatrix,
    pub last_key: BitMatrix,
    pub pr_g: Rational,
    pub pr_last: Rational,
}

fn require_multi(net: &LayeredNetwork) -> Result<(), MultiHopError> {
    if net.m() < 2 {
        return Err(MultiHopError::TooFewHops { needed: 2, got: net.m() });
    }
    Ok(())
}

/// `Pr(G)` and `Pr((G^{M-1})^{-1})` for every full-rank `G`.
pub fn theorem4_terms(net: &LayeredNetwork) -> Result<Vec<Theorem4Term>, MultiHopError> {
    require_multi(net)?;
    let dist = fullrank_distribution(net)?;
    Ok(dist
        .iter()
        .map(|(g, pr_g)| {
            let last_key = last_hop_key(g, net.m());
            let pr_last = dist.get(&last_key).cloned().unwrap_or_else(Rational::zero);
            Theorem4Term { g: g.clone(), last_key, pr_g: pr_g.clone(), pr_last }
        })
        .collect())
}

/// Per-user rate `(1/K) Σ_r r Σ_G min{Pr(G), Pr((G^{M-1})^{-1})}`.
pub fn theorem4_rate(net: &LayeredNetwork) -> Result<Rational, MultiHopError> {
    let total: Rational = theorem4_terms(net)?
        .into_iter()
        .map(|t| Rational::from(t.g.rows() as i64) * Rational::min_of(&t.pr_g, &t.pr_last))
        .sum();
    Ok(total / Rational::from(net.k() as i64))
}

/// Average rank of the bottleneck hop at `p = 1/2`, from rank counts.
pub fn corollary2_sum_capacity(net: &LayeredNetwork) -> Result<Rational, MultiHopError> {
    let p = require_common_p(net)?;
    if p != Rational::new(1, 2) {
        return Err(MultiHopError::NotHalf(p.to_string()));
    }
    let (a, b) = require_min_dimensional(net)?.dims;
    let weighted: Rational = (1..=a.min(b))
        .map(|r| Rational::from(count_rank(b, a, r)) * Rational::from(r as i64))
        .sum();
    Ok(weighted / Rational::from(num_bigint::BigInt::from(1u8) << (a * b)))
}

/// Slot type on one hop: sub-channel matrix with its transmitting and
/// receiving node subsets (sorted 0-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotKey {
    pub g: BitMatrix,
    pub tx: Vec<usize>,
    pub rx: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanEntry {
    pub g: BitMatrix,
    pub last_key: BitMatrix,
    pub pr_g: Rational,
    pub pr_last: Rational,
    /// Share of the last-hop instance available to this `G`.
    pub weight: Rational,
    /// Packets of `G` per effective sub-block, `n(G)`; each packet carries
    /// `rank(G)` bits.
    pub packets: usize,
}

impl PlanEntry {
    pub fn rank(&self) -> usize {
        self.g.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHopPlan {
    pub layers: Vec<usize>,
    pub n_b: usize,
    pub blocks: usize,
    pub margin: Rational,
    /// Unfloored per-user rate of the pairing sum, before slack.
    pub theorem4_rate: Rational,
    /// Normalizing constant actually used, after sharing collided last-hop keys.
    pub c2: Rational,
    /// Target per-user rate per sub-block, `(1 - margin) c2`.
    pub target_rate: Rational,
    pub entries: Vec<PlanEntry>,
    pub selections: Vec<HopSelection>,
}

impl MultiHopPlan {
    pub fn k(&self) -> usize {
        self.layers[0]
    }

    pub fn hops(&self) -> usize {
        self.layers.len() - 1
    }

    /// Total bits delivered per effective sub-block, all sources together.
    pub fn bits_per_sub_block(&self) -> usize {
        self.entries.iter().map(|e| e.rank() * e.packets).sum()
    }

    /// Per-user rate within a sub-block after flooring.
    pub fn per_user_rate(&self) -> Rational {
        Rational::new(self.bits_per_sub_block() as i64, (self.k() * self.n_b) as i64)
    }

    pub fn channel_uses(&self) -> usize {
        (self.blocks + self.hops() - 1) * self.n_b
    }

    /// Sum rate over the whole block including pipeline fill,
    /// `B/(B+M-1)` times the per-sub-block sum rate.
    pub fn overall_sum_rate(&self) -> Rational {
        Rational::new((self.blocks * self.bits_per_sub_block()) as i64, self.channel_uses() as i64)
    }

    /// Slot demand of hop `m` (1-based) per effective sub-block.
    pub fn demands(&self, m: usize) -> BTreeMap<SlotKey, usize> {
        let (km, kn) = (self.layers[m - 1], self.layers[m]);
        let mut out = BTreeMap::new();
        for e in self.entries.iter().filter(|e| e.packets > 0) {
            let r = e.rank();
            let share = e.packets / (binomial(km, r) * binomial(kn, r)) as usize;
            let g = if m == self.hops() { &e.last_key } else { &e.g };
            for tx in subsets(km, r) {
                for rx in subsets(kn, r) {
                    *out.entry(SlotKey { g: g.clone(), tx: tx.clone(), rx }).or_insert(0) += share;
                }
            }
        }
        out
    }

    /// True when every chain `G, ..., G, (G^{M-1})^{-1}` multiplies to `I`.
    pub fn verify_chains(&self) -> bool {
        self.entries.iter().all(|e| {
            let mut acc = BitMatrix::identity(e.rank());
            for _ in 0..self.hops() - 1 {
                acc = e.g.multiply(&acc).expect("square");
            }
            e.last_key.multiply(&acc).expect("square").is_identity()
        })
    }
}

/// Packet count granularity for rank `r`: every per-origin share on every
/// hop must be whole.
fn packet_unit(layers: &[usize], r: usize) -> u64 {
    let c = |k: usize| binomial(k, r);
    let hops = layers.len() - 1;
    let mut unit = c(layers[0]) * c(layers[1]);
    for m in 2..=hops {
        unit = unit.lcm(&(c(layers[0]) * c(layers[m - 1]) * c(layers[m])));
    }
    unit
}

/// Plan at per-user rate `(1 - margin) c2`. When several `G` share one
/// last-hop instance (possible for three or more hops), that instance's
/// probability is split evenly among them.
pub fn build_multihop_plan(
    net: &LayeredNetwork,
    n_b: usize,
    blocks: usize,
    margin: &Rational,
) -> Result<MultiHopPlan, MultiHopError> {
    require_multi(net)?;
    if !margin.is_positive() || margin >= &Rational::one() {
        return Err(MultiHopError::Margin(margin.clone()));
    }
    if n_b == 0 {
        return Err(MultiHopError::BlockTooSmall(n_b));
    }
    if blocks == 0 {
        return Err(MultiHopError::NoBlocks);
    }
    let info = require_min_dimensional(net)?;
    let selections = (1..=net.m())
        .map(|m| HopSelection::for_hop(net, m, info.dims).expect("checked"))
        .collect();
    let terms = theorem4_terms(net)?;
    let k = Rational::from(net.k() as i64);
    let pairing_rate: Rational = terms
        .iter()
        .map(|t| Rational::from(t.g.rows() as i64) * Rational::min_of(&t.pr_g, &t.pr_last))
        .sum::<Rational>()
        / &k;

    let mut collisions: BTreeMap<BitMatrix, i64> = BTreeMap::new();
    for t in &terms {
        *collisions.entry(t.last_key.clone()).or_insert(0) += 1;
    }
    let keep = Rational::one() - margin;
    let mut entries = Vec::with_capacity(terms.len());
    let mut c2 = Rational::zero();
    for t in terms {
        let share = &t.pr_last / &Rational::from(collisions[&t.last_key]);
        let weight = Rational::min_of(&t.pr_g, &share);
        c2 += Rational::from(t.g.rows() as i64) * &weight;
        let unit = packet_unit(net.layers(), t.g.rows());
        let raw = (Rational::from(n_b as i64) * &keep * &weight).floor().to_u64().unwrap_or(u64::MAX);
        let packets = (raw / unit * unit) as usize;
        entries.push(PlanEntry { g: t.g, last_key: t.last_key, pr_g: t.pr_g, pr_last: t.pr_last, weight, packets });
    }
    let c2 = c2 / &k;
    let target_rate = keep * &c2;
    Ok(MultiHopPlan {
        layers: net.layers().to_vec(),
        n_b,
        blocks,
        margin: margin.clone(),
        theorem4_rate: pairing_rate,
        c2,
        target_rate,
        entries,
        selections,
    })
}
