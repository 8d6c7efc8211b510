//! Single-hop channel pairing: every instance `H` in the first half of the
//! block is matched with an instance `H + I` in the second half, so the sum of
//! the two receptions is the interference-free source bit.

use crate::gf2::{BitMatrix, Gf2Error};
use crate::network::ChannelLaw;
use crate::rational::Rational;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingleHopError {
    #[error("single-hop pairing needs a square hop, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("block length {0} must be even and positive")]
    OddBlockLength(usize),
    #[error("margin {0} must lie strictly between 0 and 1")]
    Margin(Rational),
    #[error("target rate {0} must be non-negative")]
    NegativeRate(Rational),
    #[error("c1 is zero: no instance has a partner with positive probability")]
    ZeroC1,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn check_square(law: &ChannelLaw) -> Result<usize, SingleHopError> {
    let (r, c) = law.dims();
    if r != c {
        return Err(SingleHopError::NotSquare(r, c));
    }
    Ok(r)
}

/// Partner of `h` in the pairing.
pub fn partner(h: &BitMatrix) -> BitMatrix {
    h.add(&BitMatrix::identity(h.rows())).expect("square matrix")
}

/// `c1 = Σ_H min{Pr(H), Pr(H + I)}`.
pub fn c1(law: &ChannelLaw) -> Result<Rational, SingleHopError> {
    check_square(law)?;
    let mut total = Rational::zero();
    for (h, p) in law.distribution()? {
        let q = law.probability(&partner(&h))?;
        total += Rational::min_of(&p, &q);
    }
    Ok(total)
}

/// Per-user rate `c1 / 2`, the supremum approached as the slack vanishes.
pub fn achievable_symmetric_rate(law: &ChannelLaw) -> Result<Rational, SingleHopError> {
    Ok(c1(law)? / Rational::from(2))
}

/// Slots reserved for instance `h`: `n(h)` bits per source ride on `n(h)`
/// slots of type `h` in the first sub-block and `n(h)` slots of type `h + I`
/// in the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub h: BitMatrix,
    pub partner: BitMatrix,
    pub slots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleHopPlan {
    pub k: usize,
    /// Block length; each sub-block has `n / 2` channel uses.
    pub n: usize,
    /// Target per-user rate `R`.
    pub target_rate: Rational,
    pub c1: Rational,
    /// Instances with positive probability, in enumeration order.
    pub allocation: Vec<Allocation>,
}

impl SingleHopPlan {
    pub fn sub_block_len(&self) -> usize {
        self.n / 2
    }

    /// Information bits carried by each source per block.
    pub fn bits_per_source(&self) -> usize {
        self.allocation.iter().map(|a| a.slots).sum()
    }

    /// Per-user rate after flooring.
    pub fn realized_rate(&self) -> Rational {
        Rational::new(self.bits_per_source() as i64, self.n as i64)
    }

    /// Loss from flooring the slot counts, `R - realized_rate`.
    pub fn shortfall(&self) -> Rational {
        &self.target_rate - &self.realized_rate()
    }

    pub fn slots_for(&self, h: &BitMatrix) -> usize {
        self.allocation.iter().find(|a| &a.h == h).map_or(0, |a| a.slots)
    }
}

/// Plan at rate `R = (1 - margin) c1 / 2`.
pub fn build_plan(law: &ChannelLaw, n: usize, margin: &Rational) -> Result<SingleHopPlan, SingleHopError> {
    if !margin.is_positive() || margin >= &Rational::one() {
        return Err(SingleHopError::Margin(margin.clone()));
    }
    let rate = (Rational::one() - margin) * achievable_symmetric_rate(law)?;
    build_plan_with_rate(law, n, rate)
}

/// Plan at an explicit per-user rate, which may exceed `c1 / 2`.
/// Slot counts are `n(H) = floor(n R min{Pr(H), Pr(H + I)} / c1)`.
pub fn build_plan_with_rate(law: &ChannelLaw, n: usize, rate: Rational) -> Result<SingleHopPlan, SingleHopError> {
    let k = check_square(law)?;
    if n == 0 || n % 2 == 1 {
        return Err(SingleHopError::OddBlockLength(n));
    }
    if rate.is_negative() {
        return Err(SingleHopError::NegativeRate(rate));
    }
    let c = c1(law)?;
    if c.is_zero() {
        return Err(SingleHopError::ZeroC1);
    }
    let scale = Rational::from(n as i64) * &rate / &c;
    let mut allocation = Vec::new();
    for (h, p) in law.distribution()? {
        let partner = partner(&h);
        let q = law.probability(&partner)?;
        let slots = (&scale * &Rational::min_of(&p, &q)).floor().to_usize().unwrap_or(usize::MAX);
        allocation.push(Allocation { h, partner, slots });
    }
    Ok(SingleHopPlan { k, n, target_rate: rate, c1: c, allocation })
}
