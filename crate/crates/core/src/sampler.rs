//! Exact sampling of channel matrices and seeded per-stream RNGs.

use crate::gf2::BitMatrix;
use crate::network::ChannelLaw;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// RNG for independent stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Threshold test `Pr = num/den`, exact when both fit in 64 bits.
#[derive(Debug, Clone, Copy)]
enum Coin {
    Exact { num: u64, den: u64 },
    Approx(f64),
}

impl Coin {
    fn new(p: &crate::Rational) -> Self {
        match (p.numer().to_u64(), p.denom().to_u64()) {
            (Some(num), Some(den)) => Coin::Exact { num, den },
            _ => Coin::Approx(p.to_f64()),
        }
    }

    fn flip<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        match *self {
            Coin::Exact { num, den } => rng.gen_range(0..den) < num,
            Coin::Approx(p) => rng.gen::<f64>() < p,
        }
    }
}

#[derive(Debug, Clone)]
enum Table {
    Exact { cumulative: Vec<u64>, total: u64 },
    Approx(Vec<f64>),
}

#[derive(Debug, Clone)]
enum Kind {
    Bernoulli { base: BitMatrix, free: Vec<(usize, usize, Coin)> },
    Explicit { support: Vec<BitMatrix>, table: Table },
}

/// Draws matrices from a [`ChannelLaw`].
#[derive(Debug, Clone)]
pub struct LawSampler {
    kind: Kind,
}

impl LawSampler {
    pub fn new(law: &ChannelLaw) -> Self {
        let kind = match law {
            ChannelLaw::Bernoulli { p } => {
                let (rows, cols) = law.dims();
                let mut base = BitMatrix::zeros(rows, cols);
                let mut free = Vec::new();
                for (j, row) in p.iter().enumerate() {
                    for (i, pji) in row.iter().enumerate() {
                        if pji.is_one() {
                            base.set(j, i, true);
                        } else if !pji.is_zero() {
                            free.push((j, i, Coin::new(pji)));
                        }
                    }
                }
                Kind::Bernoulli { base, free }
            }
            ChannelLaw::Explicit { pmf, .. } => {
                let support: Vec<BitMatrix> = pmf.keys().cloned().collect();
                let den = pmf
                    .values()
                    .try_fold(1u64, |acc, p| {
                        let d = p.denom().to_u64()?;
                        let g = num_integer::gcd(acc, d);
                        (acc / g).checked_mul(d)
                    });
                let table = match den {
                    Some(total) => {
                        let mut cumulative = Vec::with_capacity(support.len());
                        let mut run = 0u64;
                        for p in pmf.values() {
                            run += (p.numer().to_u64().unwrap()) * (total / p.denom().to_u64().unwrap());
                            cumulative.push(run);
                        }
                        Table::Exact { cumulative, total }
                    }
                    None => {
                        let mut run = 0.0;
                        Table::Approx(pmf.values().map(|p| { run += p.to_f64(); run }).collect())
                    }
                };
                Kind::Explicit { support, table }
            }
        };
        Self { kind }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitMatrix {
        match &self.kind {
            Kind::Bernoulli { base, free } => {
                let mut m = base.clone();
                for &(j, i, coin) in free {
                    if coin.flip(rng) {
                        m.set(j, i, true);
                    }
                }
                m
            }
            Kind::Explicit { support, table } => {
                let idx = match table {
                    Table::Exact { cumulative, total } => {
                        let u = rng.gen_range(0..*total);
                        cumulative.partition_point(|&c| c <= u)
                    }
                    Table::Approx(cumulative) => {
                        let u = rng.gen::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                        cumulative.partition_point(|&c| c <= u).min(support.len() - 1)
                    }
                };
                support[idx].clone()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        let x: u64 = stream_rng(7, 3).gen();
        let y: u64 = stream_rng(7, 4).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn explicit_frequencies() {
        let one = BitMatrix::from_bit_rows(&["1"]).unwrap();
        let zero = BitMatrix::from_bit_rows(&["0"]).unwrap();
        let law = ChannelLaw::explicit(1, 1, vec![(one.clone(), Rational::new(1, 4)), (zero, Rational::new(3, 4))]).unwrap();
        let s = LawSampler::new(&law);
        let mut rng = stream_rng(1, 0);
        let n = 40_000;
        let hits = (0..n).filter(|_| s.sample(&mut rng) == one).count() as f64;
        let sd = (n as f64 * 0.25 * 0.75).sqrt();
        assert!((hits - n as f64 / 4.0).abs() < 4.0 * sd);
    }

    #[test]
    fn degenerate_entries_are_fixed() {
        let law = ChannelLaw::bernoulli_matrix(1, 2, vec![Rational::one(), Rational::zero()]).unwrap();
        let s = LawSampler::new(&law);
        let mut rng = stream_rng(2, 0);
        for _ in 0..10 {
            assert_eq!(s.sample(&mut rng), BitMatrix::from_bit_rows(&["10"]).unwrap());
        }
    }
}
