use super::{SimulationError, SimulationReport, TrialRecord};
use crate::gf2::BitMatrix;
use crate::multi_hop::{full_rank_subpairs, random_subsets, require_min_dimensional, subsets, HopSelection, MultiHopPlan, SlotKey};
use crate::network::LayeredNetwork;
use crate::sampler::{stream_rng, LawSampler};
use crate::Rational;
use rand::Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// One channel use of one hop after subset selection.
struct Slot {
    time: usize,
    h: BitMatrix,
}

/// A vector of `r` symbols moving between `r`-subsets of successive layers.
struct Packet {
    entry: usize,
    origin: Vec<usize>,
    holder: Vec<usize>,
    message: u64,
    value: u64,
    chain: BitMatrix,
    last_time: Option<usize>,
}

/// Runs `trials` blocks of the block Markov pairing scheme.
///
/// Hop `m` serves effective sub-block `b` during global sub-block
/// `b + m - 1`. Each slot draws the hop channel, picks the active subsets and
/// a uniformly random full-rank sub-pair, and is labeled by the resulting
/// `(G, S, T)`. A packet sent on a slot labeled `(G, S, T)` is held by `S`
/// and lands at `T` as `G` times its current value.
pub fn simulate_multi_hop(
    net: &LayeredNetwork,
    plan: &MultiHopPlan,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, SimulationError> {
    if net.layers() != plan.layers.as_slice() {
        return Err(SimulationError::PlanMismatch(format!(
            "plan for layers {:?}, network has {:?}",
            plan.layers,
            net.layers()
        )));
    }
    if trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let samplers: Vec<LawSampler> = net.hops().iter().map(LawSampler::new).collect();
    let demands: Vec<BTreeMap<SlotKey, usize>> = (1..=plan.hops()).map(|m| plan.demands(m)).collect();
    let records: Vec<TrialRecord> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(plan, &samplers, &demands, seed, t))
        .collect();
    let code = plan.overall_sum_rate();
    Ok(SimulationReport::from_records(seed, plan.k(), code, records))
}

/// Draws the channel for one slot and labels it.
fn draw_slot<R: Rng>(rng: &mut R, sampler: &LawSampler, sel: &HopSelection, (km, kn): (usize, usize)) -> (BitMatrix, Option<SlotKey>) {
    let h = sampler.sample(rng);
    let (v_tx, v_rx) = random_subsets(rng, km, sel.tx, kn, sel.rx);
    let sub = h.submatrix(&v_rx, &v_tx);
    let pairs = full_rank_subpairs(&sub);
    if pairs.is_empty() {
        return (h, None);
    }
    let (rows, cols) = &pairs[rng.gen_range(0..pairs.len())];
    let rx: Vec<usize> = rows.iter().map(|&i| v_rx[i]).collect();
    let tx: Vec<usize> = cols.iter().map(|&j| v_tx[j]).collect();
    let g = h.submatrix(&rx, &tx);
    (h, Some(SlotKey { g, tx, rx }))
}

fn run_trial(
    plan: &MultiHopPlan,
    samplers: &[LawSampler],
    demands: &[BTreeMap<SlotKey, usize>],
    seed: u64,
    trial: u64,
) -> TrialRecord {
    let mut rng = stream_rng(seed, trial);
    let (k, hops, blocks, n_b) = (plan.k(), plan.hops(), plan.blocks, plan.n_b);
    let layers = &plan.layers;

    // Message bits for every packet of every sub-block, drawn up front.
    let mut messages: Vec<Vec<u64>> = Vec::with_capacity(blocks);
    for _ in 0..blocks {
        let mut v = Vec::new();
        for e in &plan.entries {
            let mask = (1u64 << e.rank()) - 1;
            v.extend((0..e.packets).map(|_| rng.gen::<u64>() & mask));
        }
        messages.push(v);
    }

    // Channel draws in time order; slots[b][m] lists hop m's slots for sub-block b by key.
    let mut slots: Vec<Vec<HashMap<SlotKey, Vec<Slot>>>> =
        (0..blocks).map(|_| (0..hops).map(|_| HashMap::new()).collect()).collect();
    for global in 0..blocks + hops - 1 {
        for m in 0..hops {
            let Some(b) = global.checked_sub(m).filter(|&b| b < blocks) else { continue };
            let dims = (layers[m], layers[m + 1]);
            for s in 0..n_b {
                let (h, key) = draw_slot(&mut rng, &samplers[m], &plan.selections[m], dims);
                if let Some(key) = key {
                    slots[b][m].entry(key).or_default().push(Slot { time: global * n_b + s, h });
                }
            }
        }
    }

    let deficit = slots.iter().any(|per_hop| {
        per_hop
            .iter()
            .zip(demands)
            .any(|(got, need)| need.iter().any(|(key, &d)| got.get(key).map_or(0, Vec::len) < d))
    });
    let channel_uses = plan.channel_uses();
    if deficit {
        return TrialRecord {
            trial,
            encoding_error: true,
            decode_errors: 0,
            delivered_bits: 0,
            channel_uses,
            source_failed: vec![true; k],
            causality_violations: 0,
            identity_violations: 0,
        };
    }

    let mut record = TrialRecord {
        trial,
        encoding_error: false,
        decode_errors: 0,
        delivered_bits: 0,
        channel_uses,
        source_failed: vec![false; k],
        causality_violations: 0,
        identity_violations: 0,
    };
    for (b, per_hop) in slots.into_iter().enumerate() {
        let mut packets = initial_packets(plan, &messages[b]);
        for (m, mut by_key) in per_hop.into_iter().enumerate() {
            for list in by_key.values_mut() {
                list.reverse();
            }
            let last = m + 1 == hops;
            for (p, target) in route(plan, &packets, m) {
                let e = &plan.entries[packets[p].entry];
                let g = if last { &e.last_key } else { &e.g };
                let key = SlotKey { g: g.clone(), tx: packets[p].holder.clone(), rx: target.clone() };
                let slot = by_key.get_mut(&key).and_then(Vec::pop).expect("demand covered");
                transmit(&mut packets[p], &slot, g, &target, &mut record);
            }
        }
        for p in &packets {
            if !p.chain.is_identity() {
                record.identity_violations += 1;
            }
            let wrong = p.value ^ p.message;
            record.decode_errors += wrong.count_ones() as usize;
            record.delivered_bits += p.origin.len() - wrong.count_ones() as usize;
            for (i, &src) in p.origin.iter().enumerate() {
                record.source_failed[src] |= wrong >> i & 1 == 1;
            }
        }
    }
    record
}

/// Packets of one sub-block before the first hop, held by their sources.
fn initial_packets(plan: &MultiHopPlan, messages: &[u64]) -> Vec<Packet> {
    let mut out = Vec::with_capacity(messages.len());
    let mut bits = messages.iter();
    for (idx, e) in plan.entries.iter().enumerate() {
        let r = e.rank();
        let origins = subsets(plan.layers[0], r);
        let per_origin = e.packets / origins.len();
        for origin in &origins {
            for _ in 0..per_origin {
                let message = *bits.next().expect("one message per packet");
                out.push(Packet {
                    entry: idx,
                    origin: origin.clone(),
                    holder: origin.clone(),
                    message,
                    value: message,
                    chain: BitMatrix::identity(r),
                    last_time: None,
                });
            }
        }
    }
    out
}

/// Next holder of each packet on hop `m` (0-based). Packets sharing entry,
/// origin and holder are split into equal consecutive chunks, one per
/// `r`-subset of the next layer; on the last hop each packet returns to the
/// indices of its origin.
fn route(plan: &MultiHopPlan, packets: &[Packet], m: usize) -> Vec<(usize, Vec<usize>)> {
    if m + 1 == plan.hops() {
        return packets.iter().enumerate().map(|(i, p)| (i, p.origin.clone())).collect();
    }
    // (entry, origin, holder) -> packet indices
    type Group<'a> = (usize, &'a [usize], &'a [usize]);
    let mut groups: BTreeMap<Group, Vec<usize>> = BTreeMap::new();
    for (i, p) in packets.iter().enumerate() {
        groups.entry((p.entry, &p.origin, &p.holder)).or_default().push(i);
    }
    let mut out = Vec::with_capacity(packets.len());
    for ((entry, _, _), members) in groups {
        let targets = subsets(plan.layers[m + 1], plan.entries[entry].rank());
        let chunk = members.len() / targets.len();
        for (j, &p) in members.iter().enumerate() {
            out.push((p, targets[j / chunk].clone()));
        }
    }
    out
}

/// Sends the packet's symbols from its holders over the full hop channel;
/// only the target receivers keep what they hear.
fn transmit(p: &mut Packet, slot: &Slot, g: &BitMatrix, target: &[usize], record: &mut TrialRecord) {
    if p.last_time.is_some_and(|t| t >= slot.time) {
        record.causality_violations += 1;
    }
    let x = p.holder.iter().enumerate().fold(0u64, |acc, (i, &node)| acc | ((p.value >> i & 1) << node));
    let y = slot.h.apply(x);
    p.value = target.iter().enumerate().fold(0u64, |acc, (i, &node)| acc | ((y >> node & 1) << i));
    p.chain = g.multiply(&p.chain).expect("square");
    p.holder = target.to_vec();
    p.last_time = Some(slot.time);
}

/// Empirical laws of the selected sub-channel `H[V_rx, V_tx]` and of the
/// full-rank matrix `G` picked from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubchannelEstimate {
    pub samples: usize,
    pub selected: BTreeMap<BitMatrix, usize>,
    /// Counts of `G`; slots whose sub-channel is zero are absent.
    pub full_rank: BTreeMap<BitMatrix, usize>,
}

impl SubchannelEstimate {
    pub fn selected_frequency(&self, h: &BitMatrix) -> Rational {
        Rational::new(self.selected.get(h).copied().unwrap_or(0) as i64, self.samples as i64)
    }

    pub fn full_rank_frequency(&self, g: &BitMatrix) -> Rational {
        Rational::new(self.full_rank.get(g).copied().unwrap_or(0) as i64, self.samples as i64)
    }

    /// Total frequency of full-rank matrices of size `r`.
    pub fn rank_mass(&self, r: usize) -> Rational {
        let hits: usize = self.full_rank.iter().filter(|(g, _)| g.rows() == r).map(|(_, c)| c).sum();
        Rational::new(hits as i64, self.samples as i64)
    }
}

const ESTIMATE_CHUNK: usize = 4096;

/// Samples hop `m` (1-based) `samples` times with the same subset selection
/// the simulator uses.
pub fn estimate_subchannel_law(
    net: &LayeredNetwork,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<SubchannelEstimate, SimulationError> {
    if m == 0 || m > net.m() {
        return Err(crate::multi_hop::MultiHopError::NoSuchHop(m).into());
    }
    let info = require_min_dimensional(net)?;
    let sel = HopSelection::for_hop(net, m, info.dims).expect("min-dimensional");
    let sampler = LawSampler::new(net.hop(m));
    let dims = (net.layer_size(m), net.layer_size(m + 1));
    let chunks = samples.div_ceil(ESTIMATE_CHUNK);
    let parts: Vec<(BTreeMap<BitMatrix, usize>, BTreeMap<BitMatrix, usize>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let count = ESTIMATE_CHUNK.min(samples - c * ESTIMATE_CHUNK);
            let mut selected = BTreeMap::new();
            let mut full = BTreeMap::new();
            for _ in 0..count {
                let h = sampler.sample(&mut rng);
                let (v_tx, v_rx) = random_subsets(&mut rng, dims.0, sel.tx, dims.1, sel.rx);
                let sub = h.submatrix(&v_rx, &v_tx);
                let pairs = full_rank_subpairs(&sub);
                if !pairs.is_empty() {
                    let (rows, cols) = &pairs[rng.gen_range(0..pairs.len())];
                    *full.entry(sub.submatrix(rows, cols)).or_insert(0) += 1;
                }
                *selected.entry(sub).or_insert(0) += 1;
            }
            (selected, full)
        })
        .collect();
    let mut est = SubchannelEstimate { samples, selected: BTreeMap::new(), full_rank: BTreeMap::new() };
    for (s, f) in parts {
        for (h, c) in s {
            *est.selected.entry(h).or_insert(0) += c;
        }
        for (g, c) in f {
            *est.full_rank.entry(g).or_insert(0) += c;
        }
    }
    Ok(est)
}
