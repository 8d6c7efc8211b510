#![allow(dead_code)]

use rand::Rng;
use relaynet::{ChannelLaw, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn term(c: i64, p: &Rational, a: u32, b: u32) -> Rational {
    let qq = Rational::one() - p;
    Rational::from(c) * p.pow(a) * qq.pow(b)
}

/// Sum capacity of the symmetric 2-2-2 family.
pub fn poly_222(p: &Rational) -> Rational {
    term(4, p, 1, 3) + term(8, p, 2, 2) + term(8, p, 3, 1) + term(1, p, 4, 0)
}

fn poly_333_common(p: &Rational) -> Rational {
    term(9, p, 1, 8) + term(54, p, 2, 7) + term(168, p, 3, 6) + term(279, p, 4, 5) + term(90, p, 7, 2)
        + term(18, p, 8, 1)
        + term(1, p, 9, 0)
}

/// Lower curve of the symmetric 3-3-3 family.
pub fn poly_333_lower(p: &Rational) -> Rational {
    let a = term(1, p, 5, 4);
    let b = term(1, p, 6, 3);
    poly_333_common(p)
        + Rational::from(216) * &a
        + Rational::from(72) * (&a - &b).abs()
        + Rational::from(216) * Rational::min_of(&a, &b)
        + Rational::from(90) * &b
}

/// Upper curve of the symmetric 3-3-3 family.
pub fn poly_333_upper(p: &Rational) -> Rational {
    poly_333_common(p) + term(324, p, 5, 4) + term(198, p, 6, 3)
}

pub const GRID: [(i64, i64); 6] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)];

pub fn random_probability<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(2..=12);
    q(rng.gen_range(0..=d), d)
}

/// `k x k` Bernoulli law with diagonal 1/2 and random off-diagonal entries.
pub fn half_diagonal_law<R: Rng>(rng: &mut R, k: usize) -> ChannelLaw {
    let p = (0..k * k).map(|i| if i / k == i % k { q(1, 2) } else { random_probability(rng) }).collect();
    ChannelLaw::bernoulli_matrix(k, k, p).unwrap()
}
