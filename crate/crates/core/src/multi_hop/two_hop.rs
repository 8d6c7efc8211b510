//! Two-hop results: the deterministic 2-2-2 pairing, separate-instance
//! baselines and the sum-rate curves of symmetric two-hop networks.

use super::subchannel::{fullrank_distribution_of, subsets};
use super::MultiHopError;
use crate::assignment::max_weight_matching;
use crate::bounds::{expected_rank, min_cut_bound_for};
use crate::gf2::{enumerate_matrices, BitMatrix};
use crate::network::{ChannelLaw, LayeredNetwork};
use crate::rational::Rational;
use std::collections::{BTreeMap, BTreeSet};

/// Largest `|A|` such that `h[A, A] = I`: pairs in `A` are served without
/// interference in one slot while the others stay silent.
pub fn separate_instance_gain(h: &BitMatrix) -> usize {
    let k = h.rows().min(h.cols());
    for size in (1..=k).rev() {
        if subsets(k, size).iter().any(|a| h.submatrix(a, a).is_identity()) {
            return size;
        }
    }
    0
}

/// Largest `|A|` for which some on/off relay gating `D` makes
/// `(h2 D h1)[A, A] = I`. `h1` maps sources to relays, `h2` relays to
/// destinations.
pub fn pairing_gain(h1: &BitMatrix, h2: &BitMatrix) -> usize {
    assert_eq!(h2.cols(), h1.rows(), "relay layer sizes differ");
    let relays = h1.rows();
    let mut best = 0;
    for gate in 0u64..(1u64 << relays) {
        let d = BitMatrix::from_row_words(relays, &(0..relays).map(|i| (gate >> i & 1) << i).collect::<Vec<_>>());
        let composed = h2.multiply(&d).and_then(|x| x.multiply(h1)).expect("conformable");
        best = best.max(separate_instance_gain(&composed));
    }
    best
}

/// [`pairing_gain`] restricted to 2x2 hops.
pub fn pairing_gain_222(h1: &BitMatrix, h2: &BitMatrix) -> Result<usize, MultiHopError> {
    if h1.dims() != (2, 2) || h2.dims() != (2, 2) {
        return Err(MultiHopError::Not222);
    }
    Ok(pairing_gain(h1, h2))
}

/// Sum rate when each single-hop slot serves its own interference-free pairs.
pub fn separate_instance_single_hop_rate(law: &ChannelLaw) -> Result<Rational, MultiHopError> {
    Ok(law
        .distribution()?
        .into_iter()
        .map(|(h, p)| p * Rational::from(separate_instance_gain(&h) as i64))
        .sum())
}

/// `E rank(H2 H1)` with both hops drawn independently in the same slot pair.
pub fn separate_instance_two_hop_rate(law1: &ChannelLaw, law2: &ChannelLaw) -> Result<Rational, MultiHopError> {
    let d1 = law1.distribution()?;
    let d2 = law2.distribution()?;
    let mut total = Rational::zero();
    for (h1, p1) in &d1 {
        for (h2, p2) in &d2 {
            let r = h2.multiply(h1).map_err(MultiHopError::Gf2)?.rank();
            if r > 0 {
                total += p1 * p2 * Rational::from(r as i64);
            }
        }
    }
    Ok(total)
}

/// One pairing of a first-hop instance with a second-hop instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingEntry {
    pub h1: BitMatrix,
    pub h2: BitMatrix,
    pub gain: usize,
    /// `min{Pr(h1), Pr(h2)}`: fraction of slots the pair can use.
    pub weight: Rational,
}

/// Channel families with known 2-2-2 sum capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case222 {
    /// Equal direct and equal cross probabilities on both hops.
    Symmetric,
    /// Z channel, same law on both hops.
    ZSame,
    /// Z channel with direct probabilities swapped between hops.
    ZCross,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem3Report {
    pub rate: Rational,
    pub pairs: Vec<PairingEntry>,
    pub case: Case222,
    /// Sum capacity predicted for the recognized case.
    pub closed_form: Option<Rational>,
    /// Best sum-rate bound from all cuts of the network.
    pub cut_bound: Rational,
    pub capacity_achieving: bool,
}

fn check_222(law: &ChannelLaw) -> Result<(), MultiHopError> {
    if law.dims() != (2, 2) {
        return Err(MultiHopError::Not222);
    }
    Ok(())
}

/// Recognizes the symmetric and Z-channel families from the entry marginals.
pub fn classify_222(law1: &ChannelLaw, law2: &ChannelLaw) -> Case222 {
    if !matches!(law1, ChannelLaw::Bernoulli { .. }) || !matches!(law2, ChannelLaw::Bernoulli { .. }) {
        return Case222::General;
    }
    // p(j, i, m) with 1-based indices.
    let p = |j: usize, i: usize, m: usize| if m == 1 { law1.marginal(j - 1, i - 1) } else { law2.marginal(j - 1, i - 1) };
    let all_eq = |v: &[Rational]| v.windows(2).all(|w| w[0] == w[1]);
    if all_eq(&[p(1, 1, 1), p(2, 2, 1), p(1, 1, 2), p(2, 2, 2)]) && all_eq(&[p(1, 2, 1), p(2, 1, 1), p(1, 2, 2), p(2, 1, 2)]) {
        return Case222::Symmetric;
    }
    let z = p(2, 1, 1).is_zero() && p(2, 1, 2).is_zero() && p(1, 2, 1) == p(1, 2, 2);
    if z && p(1, 1, 1) == p(1, 1, 2) && p(2, 2, 1) == p(2, 2, 2) {
        return Case222::ZSame;
    }
    if z && p(1, 1, 1) == p(2, 2, 2) && p(2, 2, 1) == p(1, 1, 2) {
        return Case222::ZCross;
    }
    Case222::General
}

/// Sum rate of the deterministic 2-2-2 pairing. Every invertible first-hop
/// instance is paired with its inverse (two bits per slot pair); rank-one
/// instances are matched to rank-one second-hop instances that can deliver one
/// bit, choosing the matching with the largest total weight.
pub fn theorem3_rate_222(law1: &ChannelLaw, law2: &ChannelLaw) -> Result<Theorem3Report, MultiHopError> {
    check_222(law1)?;
    check_222(law2)?;
    let all: Vec<BitMatrix> = enumerate_matrices(2, 2)?.collect();
    let mut pairs = Vec::new();
    let mut rate = Rational::zero();

    for h1 in all.iter().filter(|h| h.rank() == 2) {
        let h2 = h1.inverse()?.expect("invertible");
        let weight = Rational::min_of(&law1.probability(h1)?, &law2.probability(&h2)?);
        rate += Rational::from(2) * &weight;
        pairs.push(PairingEntry { h1: h1.clone(), h2, gain: 2, weight });
    }

    let rank1: Vec<&BitMatrix> = all.iter().filter(|h| h.rank() == 1).collect();
    let mut table = Vec::with_capacity(rank1.len());
    for h1 in &rank1 {
        let p1 = law1.probability(h1)?;
        let mut row = Vec::with_capacity(rank1.len());
        for h2 in &rank1 {
            row.push((pairing_gain(h1, h2) >= 1).then(|| Rational::min_of(&p1, &law2.probability(h2).expect("2x2"))));
        }
        table.push(row);
    }
    let matching = max_weight_matching(&table);
    rate += &matching.total;
    for (i, j) in matching.pairs {
        let weight = table[i][j].clone().expect("allowed pair");
        pairs.push(PairingEntry { h1: rank1[i].clone(), h2: rank1[j].clone(), gain: 1, weight });
    }

    let case = classify_222(law1, law2);
    let closed_form = match case {
        Case222::Symmetric | Case222::ZSame => Some(expected_rank(law1)?),
        Case222::ZCross => {
            let (pa, pc) = (law1.marginal(0, 0), law1.marginal(1, 1));
            Some(if pa >= pc { Rational::from(2) * pc } else { Rational::from(2) * pa })
        }
        Case222::General => None,
    };
    let cut_bound = cut_bound_222(law1, law2)?;
    let capacity_achieving = rate == cut_bound;
    Ok(Theorem3Report { rate, pairs, case, closed_form, cut_bound, capacity_achieving })
}

/// `min(min over cuts separating both pairs, sum of the single-pair minima)`.
fn cut_bound_222(law1: &ChannelLaw, law2: &ChannelLaw) -> Result<Rational, MultiHopError> {
    let net = LayeredNetwork::new(vec![2, 2, 2], vec![law1.clone(), law2.clone()]).map_err(|_| MultiHopError::Not222)?;
    let bound = |pairs: &[usize]| -> Result<Rational, MultiHopError> {
        let set: BTreeSet<usize> = pairs.iter().copied().collect();
        match min_cut_bound_for(&net, &set) {
            Ok(v) => Ok(v.expect("source-only cut exists")),
            Err(crate::bounds::BoundsError::Gf2(e)) => Err(e.into()),
            Err(_) => Err(MultiHopError::Not222),
        }
    };
    let joint = bound(&[1, 2])?;
    let split = bound(&[1])? + bound(&[2])?;
    Ok(Rational::min_of(&joint, &split))
}

/// Extra two-hop sum rate from instances whose probability exceeds that of
/// their inverse partner. The excess on each hop is re-matched across
/// instances of the same size, each pair delivering its gated pairing gain.
pub fn residual_repairing(
    hop1: &BTreeMap<BitMatrix, Rational>,
    hop2: &BTreeMap<BitMatrix, Rational>,
) -> Rational {
    let pr = |d: &BTreeMap<BitMatrix, Rational>, g: &BitMatrix| d.get(g).cloned().unwrap_or_else(Rational::zero);
    let inv = |g: &BitMatrix| g.inverse().expect("square").expect("full rank");
    let mut left: BTreeMap<usize, Vec<(BitMatrix, Rational)>> = BTreeMap::new();
    let mut right: BTreeMap<usize, Vec<(BitMatrix, Rational)>> = BTreeMap::new();
    for (g, p) in hop1 {
        let used = Rational::min_of(p, &pr(hop2, &inv(g)));
        let excess = p - &used;
        if excess.is_positive() {
            left.entry(g.rows()).or_default().push((g.clone(), excess));
        }
    }
    for (x, p) in hop2 {
        let used = Rational::min_of(&pr(hop1, &inv(x)), p);
        let excess = p - &used;
        if excess.is_positive() {
            right.entry(x.rows()).or_default().push((x.clone(), excess));
        }
    }
    let mut total = Rational::zero();
    for (r, l) in &left {
        let Some(rv) = right.get(r) else { continue };
        let table: Vec<Vec<Option<Rational>>> = l
            .iter()
            .map(|(g, eg)| {
                rv.iter()
                    .map(|(x, ex)| {
                        let gain = pairing_gain(g, x);
                        (gain > 0).then(|| Rational::from(gain as i64) * Rational::min_of(eg, ex))
                    })
                    .collect()
            })
            .collect();
        total += max_weight_matching(&table).total;
    }
    total
}

/// Lower and upper sum-rate curves at one probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub p: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

/// 2-2-2 with every entry one with probability `p`: the deterministic pairing
/// rate against the bottleneck average rank.
pub fn curve_222(p: &Rational) -> Result<CurvePoint, MultiHopError> {
    let law = ChannelLaw::bernoulli_uniform(2, 2, p.clone()).map_err(|_| MultiHopError::Not222)?;
    let lower = theorem3_rate_222(&law, &law)?.rate;
    let upper = expected_rank(&law)?;
    Ok(CurvePoint { p: p.clone(), lower, upper })
}

/// 3-3-3 with every entry one with probability `p`: the chained pairing sum
/// plus residual re-pairing, against the bottleneck average rank.
pub fn curve_333(p: &Rational) -> Result<CurvePoint, MultiHopError> {
    let law = ChannelLaw::bernoulli_uniform(3, 3, p.clone()).map_err(|_| MultiHopError::HeterogeneousP)?;
    let dist = fullrank_distribution_of(&law)?;
    let mut chained = Rational::zero();
    for (g, pg) in &dist {
        let inv = g.inverse()?.expect("full rank");
        let pi = dist.get(&inv).cloned().unwrap_or_else(Rational::zero);
        chained += Rational::from(g.rows() as i64) * Rational::min_of(pg, &pi);
    }
    let lower = chained + residual_repairing(&dist, &dist);
    let upper = expected_rank(&law)?;
    Ok(CurvePoint { p: p.clone(), lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn gains() {
        let h = m(&["01", "11"]);
        let hi = h.inverse().unwrap().unwrap();
        assert_eq!(pairing_gain_222(&h, &hi).unwrap(), 2);
        let z = BitMatrix::zeros(2, 2);
        assert_eq!(pairing_gain_222(&z, &z).unwrap(), 0);
        // Sources reach relay 1 only; destination 1 hears relay 2 only.
        assert_eq!(pairing_gain_222(&m(&["11", "00"]), &m(&["01", "00"])).unwrap(), 0);
        assert_eq!(pairing_gain_222(&m(&["10", "10"]), &m(&["10", "00"])).unwrap(), 1);
        for h in enumerate_matrices(2, 2).unwrap().filter(|h| h.rank() == 2) {
            assert_eq!(pairing_gain(&h, &h.inverse().unwrap().unwrap()), 2);
        }
        assert!(pairing_gain_222(&BitMatrix::identity(3), &BitMatrix::identity(3)).is_err());
    }

    #[test]
    fn separate_instance_rates() {
        let uni = ChannelLaw::bernoulli_uniform(2, 2, q(1, 2)).unwrap();
        assert_eq!(separate_instance_single_hop_rate(&uni).unwrap(), q(13, 16));
        assert_eq!(separate_instance_two_hop_rate(&uni, &uni).unwrap(), q(117, 128));
    }

    #[test]
    fn symmetric_uniform_reaches_capacity() {
        let uni = ChannelLaw::bernoulli_uniform(2, 2, q(1, 2)).unwrap();
        let rep = theorem3_rate_222(&uni, &uni).unwrap();
        assert_eq!(rep.rate, q(21, 16));
        assert_eq!(rep.case, Case222::Symmetric);
        assert_eq!(rep.closed_form, Some(q(21, 16)));
        assert!(rep.capacity_achieving);
        assert_eq!(rep.pairs.iter().filter(|p| p.gain == 2).count(), 6);
        assert_eq!(rep.pairs.iter().filter(|p| p.gain == 1).count(), 9);
    }

    #[test]
    fn z_channel_cross_case() {
        let z = |pa: Rational, pb: Rational, pc: Rational| {
            let l1 = ChannelLaw::bernoulli_matrix(2, 2, vec![pa.clone(), pb.clone(), Rational::zero(), pc.clone()]).unwrap();
            let l2 = ChannelLaw::bernoulli_matrix(2, 2, vec![pc, pb, Rational::zero(), pa]).unwrap();
            theorem3_rate_222(&l1, &l2).unwrap()
        };
        let rep = z(q(3, 4), q(1, 3), q(1, 5));
        assert_eq!(rep.case, Case222::ZCross);
        assert_eq!(rep.rate, q(2, 5));
        assert!(rep.capacity_achieving);
        let rep = z(q(1, 5), q(1, 3), q(3, 4));
        assert_eq!(rep.rate, q(2, 5));
        assert!(rep.capacity_achieving);
    }

    #[test]
    fn curves_at_half() {
        let c = curve_222(&q(1, 2)).unwrap();
        assert_eq!((c.lower, c.upper), (q(21, 16), q(21, 16)));
        let c = curve_333(&q(1, 2)).unwrap();
        assert_eq!((c.lower, c.upper), (q(1141, 512), q(1141, 512)));
    }

    #[test]
    fn curve_333_off_half() {
        let c = curve_333(&q(1, 4)).unwrap();
        assert_eq!((c.lower, c.upper), (q(397927, 262144), q(399871, 262144)));
        let c = curve_333(&q(1, 3)).unwrap();
        assert_eq!((c.lower, c.upper), (q(35773, 19683), q(36061, 19683)));
        for p in [Rational::zero(), Rational::one()] {
            let c = curve_333(&p).unwrap();
            assert_eq!(c.lower, c.upper);
        }
    }
}
