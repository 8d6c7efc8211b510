//! Dense bit matrices over the two-element field.
//!
//! Rows are packed into `u64` words, so both dimensions are limited to 64.
//! Exhaustive enumeration visits matrices in row-major little-endian order:
//! entry `(0, 0)` is bit 0 of the code, entry `(0, 1)` is bit 1, and entry
//! `(i, j)` is bit `i * cols + j`.

use crate::network::ChannelLaw;
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

/// Largest number of entries `rows * cols` that may be enumerated exhaustively.
pub const ENUMERATION_CAP_BITS: usize = 24;

/// Largest supported row or column count.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("enumeration of {bits} entries exceeds the cap of {ENUMERATION_CAP_BITS}")]
    CapExceeded { bits: usize },
    #[error("invalid dimensions {0}x{1}")]
    InvalidDimensions(usize, usize),
    #[error("malformed bit row `{0}`")]
    MalformedRow(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn col_mask(cols: usize) -> u64 {
    if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_DIM && cols <= MAX_DIM, "dimensions {rows}x{cols} exceed {MAX_DIM}");
        Self { rows, cols, data: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from row words; bit `j` of `rows[i]` is entry `(i, j)`.
    pub fn from_row_words(cols: usize, rows: &[u64]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (dst, src) in m.data.iter_mut().zip(rows) {
            *dst = src & col_mask(cols);
        }
        m
    }

    /// Parses rows written as strings of `0`/`1`, leftmost character = column 0.
    pub fn from_bit_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.is_empty() || cols == 0 || rows.len() > MAX_DIM || cols > MAX_DIM {
            return Err(Gf2Error::InvalidDimensions(rows.len(), cols));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Gf2Error::MalformedRow(row.to_string()));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.data[i] |= 1 << j,
                    _ => return Err(Gf2Error::MalformedRow(row.to_string())),
                }
            }
        }
        Ok(m)
    }

    /// Inverse of [`BitMatrix::to_code`].
    pub fn from_code(rows: usize, cols: usize, code: u64) -> Self {
        assert!(rows * cols <= 64, "code only defined for at most 64 entries");
        let mut m = Self::zeros(rows, cols);
        let mask = col_mask(cols);
        for i in 0..rows {
            m.data[i] = (code >> (i * cols)) & mask;
        }
        m
    }

    /// Position of this matrix in the enumeration order.
    pub fn to_code(&self) -> u64 {
        assert!(self.rows * self.cols <= 64, "code only defined for at most 64 entries");
        self.data.iter().enumerate().fold(0, |acc, (i, w)| acc | (w << (i * self.cols)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_word(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.data.iter().enumerate().all(|(i, &w)| w == 1 << i)
    }

    pub fn count_ones(&self) -> u32 {
        self.data.iter().map(|w| w.count_ones()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.data[j] |= 1 << i;
                }
            }
        }
        t
    }

    /// Submatrix on the given row and column indices, in the given order.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut s = Self::zeros(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                if self.get(i, j) {
                    s.data[a] |= 1 << b;
                }
            }
        }
        s
    }

    /// Matrix-vector product; bit `j` of `x` is the `j`-th input symbol.
    pub fn apply(&self, x: u64) -> u64 {
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, w)| acc | ((((w & x).count_ones() & 1) as u64) << i))
    }

    pub fn rank(&self) -> usize {
        rank_of_words(self.data.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.dims() != other.dims() {
            return Err(Gf2Error::DimensionMismatch { left: self.dims(), right: other.dims() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// `self * other`, with XOR accumulation.
    pub fn multiply(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch { left: self.dims(), right: other.dims() });
        }
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = 0u64;
            let mut w = self.data[i];
            while w != 0 {
                let k = w.trailing_zeros() as usize;
                acc ^= other.data[k];
                w &= w - 1;
            }
            p.data[i] = acc;
        }
        Ok(p)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| (a[r] >> col) & 1 == 1) else {
                return Ok(None);
            };
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(Some(Self { rows: n, cols: n, data: inv }))
    }

    /// `self` raised to a non-negative power; square matrices only.
    pub fn power(&self, exp: usize) -> Result<Self, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare(self.rows, self.cols));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }
}

/// Rank of a set of row words by elimination.
pub fn rank_of_words(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows.iter_mut().skip(i + 1) {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn add(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
    a.add(b)
}

pub fn multiply(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
    a.multiply(b)
}

pub fn inverse(m: &BitMatrix) -> Result<Option<BitMatrix>, Gf2Error> {
    m.inverse()
}

/// Iterator over every `rows x cols` matrix in enumeration order.
#[derive(Debug, Clone)]
pub struct MatrixEnumerator {
    rows: usize,
    cols: usize,
    next: u64,
    end: u64,
}

impl Iterator for MatrixEnumerator {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        if self.next >= self.end {
            return None;
        }
        let m = BitMatrix::from_code(self.rows, self.cols, self.next);
        self.next += 1;
        Some(m)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for MatrixEnumerator {}

pub fn check_cap(bits: usize) -> Result<(), Gf2Error> {
    if bits > ENUMERATION_CAP_BITS {
        Err(Gf2Error::CapExceeded { bits })
    } else {
        Ok(())
    }
}

pub fn enumerate_matrices(rows: usize, cols: usize) -> Result<MatrixEnumerator, Gf2Error> {
    if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
        return Err(Gf2Error::InvalidDimensions(rows, cols));
    }
    check_cap(rows * cols)?;
    Ok(MatrixEnumerator { rows, cols, next: 0, end: 1u64 << (rows * cols) })
}

/// Number of `rows x cols` matrices of rank exactly `r`, from the product
/// formula `prod_{i<r} (2^rows - 2^i)(2^cols - 2^i) / (2^r - 2^i)`.
pub fn count_rank(rows: usize, cols: usize, r: usize) -> BigInt {
    if r > rows.min(cols) {
        return BigInt::zero();
    }
    let two = |e: usize| BigInt::one() << e;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= (two(rows) - two(i)) * (two(cols) - two(i));
        den *= two(r) - two(i);
    }
    num / den
}

/// Probability of `m` under `law`.
pub fn matrix_probability(m: &BitMatrix, law: &ChannelLaw) -> Result<Rational, Gf2Error> {
    law.probability(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(m(&["11", "11"]).rank(), 1);
        assert_eq!(m(&["110", "011", "101"]).rank(), 2);
        assert_eq!(m(&["100", "010", "001"]).rank(), 3);
    }

    #[test]
    fn add_examples() {
        let i = BitMatrix::identity(2);
        assert!(i.add(&i).unwrap().is_zero());
        assert_eq!(m(&["00", "10"]).add(&i).unwrap(), m(&["10", "11"]));
        assert!(i.add(&BitMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn multiply_examples() {
        let a = m(&["11", "01"]);
        assert!(a.multiply(&a).unwrap().is_identity());
        let h = m(&["10", "11"]);
        assert_eq!(BitMatrix::identity(2).multiply(&h).unwrap(), h);
        assert_eq!(m(&["101"]).multiply(&m(&["1", "1", "1"])).unwrap(), m(&["0"]));
        assert!(a.multiply(&BitMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(BitMatrix::identity(3).inverse().unwrap(), Some(BitMatrix::identity(3)));
        assert_eq!(m(&["11", "11"]).inverse().unwrap(), None);
        let x = m(&["01", "11"]);
        let inv = x.inverse().unwrap().unwrap();
        assert_eq!(inv, m(&["11", "10"]));
        assert!(x.multiply(&inv).unwrap().is_identity());
        assert!(BitMatrix::zeros(2, 3).inverse().is_err());
    }

    #[test]
    fn code_round_trip_and_order() {
        let first: Vec<_> = enumerate_matrices(2, 2).unwrap().take(3).collect();
        assert_eq!(first[0], m(&["00", "00"]));
        assert_eq!(first[1], m(&["10", "00"]));
        assert_eq!(first[2], m(&["01", "00"]));
        assert_eq!(BitMatrix::from_code(2, 2, 4), m(&["00", "10"]));
        for code in 0..512 {
            assert_eq!(BitMatrix::from_code(3, 3, code).to_code(), code);
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_matrices(1, 1).unwrap().count(), 2);
        assert_eq!(enumerate_matrices(2, 2).unwrap().count(), 16);
        assert_eq!(enumerate_matrices(3, 3).unwrap().count(), 512);
        assert!(matches!(enumerate_matrices(5, 5), Err(Gf2Error::CapExceeded { bits: 25 })));
    }

    #[test]
    fn count_rank_small() {
        let c = |a, b, r| count_rank(a, b, r);
        assert_eq!((c(2, 2, 0), c(2, 2, 1), c(2, 2, 2)), (1.into(), 9.into(), 6.into()));
        assert_eq!(c(3, 3, 3), BigInt::from(168));
        assert_eq!(c(3, 3, 1), BigInt::from(49));
        assert_eq!(c(3, 3, 2), BigInt::from(294));
        assert_eq!(c(2, 3, 1), BigInt::from(21));
        assert_eq!(c(7, 5, 0), BigInt::one());
        assert_eq!(c(2, 2, 3), BigInt::zero());
    }

    #[test]
    fn apply_matches_multiply() {
        let h = m(&["110", "011"]);
        for x in 0..8u64 {
            let col = BitMatrix::from_row_words(1, &[x & 1, (x >> 1) & 1, (x >> 2) & 1]);
            let y = h.multiply(&col).unwrap();
            assert_eq!(h.apply(x), y.row_word(0) | (y.row_word(1) << 1));
        }
    }

    #[test]
    fn transpose_and_submatrix() {
        let h = m(&["110", "011"]);
        assert_eq!(h.transpose(), m(&["10", "11", "01"]));
        assert_eq!(h.submatrix(&[1], &[0, 2]), m(&["01"]));
        assert_eq!(h.to_string(), "[110,011]");
    }
}
