//! Cut-set upper bounds on achievable rates.

use crate::gf2::Gf2Error;
use crate::network::{cut_sets, enumerate_cuts, Cut, CutSets, LayeredNetwork, NetworkError};
use crate::rational::Rational;
use crate::sampler::{stream_rng, LawSampler};
use crate::ChannelLaw;
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("per-user bounds need a single-hop network, got {0} hops")]
    NotSingleHop(usize),
}

/// `E rank(H)` computed exactly over the support of `law`.
pub fn expected_rank(law: &ChannelLaw) -> Result<Rational, Gf2Error> {
    Ok(law
        .distribution()?
        .into_iter()
        .map(|(m, p)| p * Rational::from(m.rank() as i64))
        .sum())
}

/// Monte Carlo estimate of a mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

const MC_CHUNK: u64 = 4096;

/// Sample mean of `rank(H)`. Chunk `c` draws from stream `c` of `seed`, so the
/// result does not depend on the number of worker threads.
pub fn expected_rank_mc(law: &ChannelLaw, samples: u64, seed: u64) -> Estimate {
    let sampler = LawSampler::new(law);
    let chunks = samples.div_ceil(MC_CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut s = 0u64;
            let mut s2 = 0u64;
            for _ in 0..len {
                let r = sampler.sample(&mut rng).rank() as u64;
                s += r;
                s2 += r * r;
            }
            (s, s2)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = sum as f64 / n;
    let var = if samples > 1 { ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Estimate { mean, stderr: (var / n).sqrt(), samples }
}

/// Bound on the sum rate of the pairs crossing one cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutBound {
    pub value: Rational,
    /// Set when `Ω_S` or `Ω_D` is empty and the value 0 is a convention.
    pub empty_cut: bool,
    pub sets: CutSets,
}

pub fn cutset_bound(net: &LayeredNetwork, cut: &Cut) -> Result<CutBound, BoundsError> {
    let sets = cut_sets(net, cut);
    if sets.omega_s.is_empty() || sets.omega_d.is_empty() {
        return Ok(CutBound { value: Rational::zero(), empty_cut: true, sets });
    }
    let law = crate::network::cut_channel_law(net, cut)?;
    Ok(CutBound { value: expected_rank(&law)?, empty_cut: false, sets })
}

/// `E rank(H_m)` for each hop.
pub fn layer_bounds(net: &LayeredNetwork) -> Result<Vec<Rational>, Gf2Error> {
    net.hops().iter().map(expected_rank).collect()
}

/// `min_m E rank(H_m)`.
pub fn sum_rate_upper_bound(net: &LayeredNetwork) -> Result<Rational, Gf2Error> {
    Ok(layer_bounds(net)?.into_iter().min().expect("at least one hop"))
}

/// `Pr(h_kk = 1)` for each pair of a single-hop network.
pub fn per_user_bounds(net: &LayeredNetwork) -> Result<Vec<Rational>, BoundsError> {
    if net.m() != 1 {
        return Err(BoundsError::NotSingleHop(net.m()));
    }
    Ok((0..net.k()).map(|k| net.hop(1).marginal(k, k)).collect())
}

/// Minimum of the cut bound over all cuts whose pair set equals `pairs`.
pub fn min_cut_bound_for(net: &LayeredNetwork, pairs: &BTreeSet<usize>) -> Result<Option<Rational>, BoundsError> {
    let mut best: Option<Rational> = None;
    for cut in enumerate_cuts(net)? {
        let sets = cut_sets(net, &cut);
        if &sets.k_omega != pairs {
            continue;
        }
        let b = cutset_bound(net, &cut)?.value;
        if best.as_ref().is_none_or(|x| b < *x) {
            best = Some(b);
        }
    }
    Ok(best)
}

/// Exhaustive sum-rate bound: minimum over all cuts separating every pair.
pub fn exhaustive_sum_bound(net: &LayeredNetwork) -> Result<Rational, BoundsError> {
    let all: BTreeSet<usize> = (1..=net.k()).collect();
    Ok(min_cut_bound_for(net, &all)?.expect("the all-sources cut always exists"))
}
