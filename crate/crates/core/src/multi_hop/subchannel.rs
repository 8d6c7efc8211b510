//! Random selection of active node subsets and the laws of the resulting
//! sub-channels.

use super::{require_common_p, require_min_dimensional, MultiHopError};
use crate::gf2::{check_cap, enumerate_matrices, BitMatrix};
use crate::network::{ChannelLaw, LayeredNetwork};
use crate::rational::Rational;
use rand::Rng;
use std::collections::BTreeMap;

/// Active subset sizes used on one hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopSelection {
    pub hop: usize,
    /// Number of active transmitters in layer `hop`.
    pub tx: usize,
    /// Number of active receivers in layer `hop + 1`.
    pub rx: usize,
    /// True when the bottleneck dimensions are used transposed.
    pub swapped: bool,
}

impl HopSelection {
    /// Sizes for hop `m` given bottleneck dimensions `(a, b) = (K_{m0}, K_{m0+1})`.
    /// The unswapped orientation is preferred when both fit.
    pub fn for_hop(net: &LayeredNetwork, m: usize, (a, b): (usize, usize)) -> Option<Self> {
        let (km, kn) = (net.layer_size(m), net.layer_size(m + 1));
        if km >= a && kn >= b {
            Some(Self { hop: m, tx: a, rx: b, swapped: false })
        } else if km >= b && kn >= a {
            Some(Self { hop: m, tx: b, rx: a, swapped: true })
        } else {
            None
        }
    }
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

/// Pairs `(rows, cols)` of `rank(h)`-subsets on which `h` keeps its rank,
/// rows outer and columns inner, both lexicographic. Empty for the zero matrix.
pub fn full_rank_subpairs(h: &BitMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let r = h.rank();
    if r == 0 {
        return Vec::new();
    }
    let cols = subsets(h.cols(), r);
    let mut out = Vec::new();
    for rows in subsets(h.rows(), r) {
        for c in &cols {
            if h.submatrix(&rows, c).rank() == r {
                out.push((rows.clone(), c.clone()));
            }
        }
    }
    out
}

/// Law of the selected sub-channel: i.i.d. entries with the common `p`, in the
/// bottleneck shape `K_{m0+1} x K_{m0}`.
pub fn bottleneck_law(net: &LayeredNetwork) -> Result<ChannelLaw, MultiHopError> {
    let p = require_common_p(net)?;
    let info = require_min_dimensional(net)?;
    let (a, b) = info.dims;
    Ok(ChannelLaw::bernoulli_uniform(b, a, p).expect("valid dimensions and probability"))
}

/// Probability that the selected sub-channel equals `h`: `p` raised to the
/// number of ones times `1 - p` raised to the number of zeros.
pub fn subchannel_probability(net: &LayeredNetwork, h: &BitMatrix) -> Result<Rational, MultiHopError> {
    let law = bottleneck_law(net)?;
    Ok(law.probability(h)?)
}

/// `Pr(G)` for every full-rank square `G`, by spreading each bottleneck
/// instance `H` uniformly over its full-rank sub-pairs.
pub fn fullrank_distribution(net: &LayeredNetwork) -> Result<BTreeMap<BitMatrix, Rational>, MultiHopError> {
    let law = bottleneck_law(net)?;
    Ok(fullrank_distribution_of(&law)?)
}

pub(crate) fn fullrank_distribution_of(law: &ChannelLaw) -> Result<BTreeMap<BitMatrix, Rational>, crate::gf2::Gf2Error> {
    let mut out: BTreeMap<BitMatrix, Rational> = BTreeMap::new();
    for (h, p) in law.distribution()? {
        let pairs = full_rank_subpairs(&h);
        if pairs.is_empty() {
            continue;
        }
        let share = p / Rational::from(pairs.len() as i64);
        for (rows, cols) in pairs {
            *out.entry(h.submatrix(&rows, &cols)).or_insert_with(Rational::zero) += &share;
        }
    }
    Ok(out)
}

fn check_full_rank(g: &BitMatrix) -> Result<usize, MultiHopError> {
    if !g.is_square() || g.is_zero() || g.rank() != g.rows() {
        return Err(MultiHopError::NotFullRank(g.clone()));
    }
    Ok(g.rows())
}

/// `Pr(G)` as the double sum over subset pairs `(V', V'')` of size `r` and
/// over bottleneck instances that contain `G` there with the same rank, each
/// weighted by one over its number of full-rank sub-pairs.
pub fn fullrank_sub_probability(net: &LayeredNetwork, g: &BitMatrix) -> Result<Rational, MultiHopError> {
    let r = check_full_rank(g)?;
    let law = bottleneck_law(net)?;
    let (rows, cols) = law.dims();
    if r > rows.min(cols) {
        return Err(MultiHopError::TooLarge { side: r, k_min: rows.min(cols) });
    }
    check_cap(rows * cols)?;
    let instances: Vec<(BitMatrix, Rational, usize)> = enumerate_matrices(rows, cols)?
        .filter(|h| h.rank() == r)
        .map(|h| {
            let p = law.probability(&h).expect("shape matches");
            let v = full_rank_subpairs(&h).len();
            (h, p, v)
        })
        .collect();
    let mut total = Rational::zero();
    for v_rx in subsets(rows, r) {
        for v_tx in subsets(cols, r) {
            for (h, p, v) in &instances {
                if &h.submatrix(&v_rx, &v_tx) == g {
                    total += p / &Rational::from(*v as i64);
                }
            }
        }
    }
    Ok(total)
}

fn check_subset(s: &[usize], n: usize) -> Result<(), MultiHopError> {
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= n) {
        return Err(MultiHopError::BadSubset(s.to_vec()));
    }
    Ok(())
}

/// `Pr(G, V'_m, V'_{m+1}) = Pr(G) / (C(K_m, r) C(K_{m+1}, r))`. Subsets are
/// 0-based sorted node indices of layers `m` and `m + 1`.
pub fn fullrank_sub_with_sets_probability(
    net: &LayeredNetwork,
    m: usize,
    g: &BitMatrix,
    v_tx: &[usize],
    v_rx: &[usize],
) -> Result<Rational, MultiHopError> {
    if m == 0 || m > net.m() {
        return Err(MultiHopError::NoSuchHop(m));
    }
    let r = check_full_rank(g)?;
    if v_tx.len() != r || v_rx.len() != r {
        return Err(MultiHopError::SubsetMismatch { rank: r, got: (v_tx.len(), v_rx.len()) });
    }
    check_subset(v_tx, net.layer_size(m))?;
    check_subset(v_rx, net.layer_size(m + 1))?;
    let dist = fullrank_distribution(net)?;
    let pg = dist.get(g).cloned().unwrap_or_else(Rational::zero);
    let pairs = binomial(net.layer_size(m), r) * binomial(net.layer_size(m + 1), r);
    Ok(pg / Rational::from(pairs as i64))
}

/// Uniformly random active subsets `(V_tx, V_rx)` for hop `m`, as sorted
/// 0-based indices.
pub fn subselect_tx_rx<R: Rng + ?Sized>(
    net: &LayeredNetwork,
    m: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>), MultiHopError> {
    if m == 0 || m > net.m() {
        return Err(MultiHopError::NoSuchHop(m));
    }
    let info = require_min_dimensional(net)?;
    let sel = HopSelection::for_hop(net, m, info.dims).expect("checked above");
    Ok(random_subsets(rng, net.layer_size(m), sel.tx, net.layer_size(m + 1), sel.rx))
}

pub(crate) fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    if k == n {
        return (0..n).collect();
    }
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

pub(crate) fn random_subsets<R: Rng + ?Sized>(
    rng: &mut R,
    n_tx: usize,
    k_tx: usize,
    n_rx: usize,
    k_rx: usize,
) -> (Vec<usize>, Vec<usize>) {
    let tx = random_subset(rng, n_tx, k_tx);
    let rx = random_subset(rng, n_rx, k_rx);
    (tx, rx)
}
