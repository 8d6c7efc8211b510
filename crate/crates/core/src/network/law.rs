//! Per-hop probability laws on channel matrices.

use crate::gf2::{check_cap, BitMatrix, Gf2Error, MAX_DIM};
use crate::rational::Rational;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("probability {0} is outside [0, 1]")]
    NotProbability(Rational),
    #[error("pmf sums to {0}, expected 1")]
    PmfSum(Rational),
    #[error("law has {got} entries, expected {expected}")]
    EntryCount { expected: usize, got: usize },
    #[error("pmf matrix {matrix} does not have dimensions {rows}x{cols}")]
    PmfDimensions { matrix: BitMatrix, rows: usize, cols: usize },
    #[error("matrix {0} appears twice in the pmf")]
    DuplicateMatrix(BitMatrix),
    #[error("empty pmf")]
    EmptyPmf,
    #[error("invalid law dimensions {0}x{1}")]
    InvalidDimensions(usize, usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Law of a random `rows x cols` channel matrix.
///
/// `Bernoulli` entries are independent with `p[j][i] = Pr(entry (j, i) = 1)`.
/// `Explicit` is a finite pmf that may correlate entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelLaw {
    Bernoulli { p: Vec<Vec<Rational>> },
    Explicit { rows: usize, cols: usize, pmf: BTreeMap<BitMatrix, Rational> },
}

impl ChannelLaw {
    /// Every entry is one with probability `p`.
    pub fn bernoulli_uniform(rows: usize, cols: usize, p: Rational) -> Result<Self, LawError> {
        Self::bernoulli_matrix(rows, cols, vec![p; rows * cols])
    }

    /// Entry probabilities given row-major.
    pub fn bernoulli_matrix(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LawError> {
        if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
            return Err(LawError::InvalidDimensions(rows, cols));
        }
        if entries.len() != rows * cols {
            return Err(LawError::EntryCount { expected: rows * cols, got: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|p| !p.is_probability()) {
            return Err(LawError::NotProbability(bad.clone()));
        }
        let p = entries.chunks(cols).map(|c| c.to_vec()).collect();
        Ok(Self::Bernoulli { p })
    }

    /// Finite pmf; zero-probability entries are dropped.
    pub fn explicit<I>(rows: usize, cols: usize, pmf: I) -> Result<Self, LawError>
    where
        I: IntoIterator<Item = (BitMatrix, Rational)>,
    {
        if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
            return Err(LawError::InvalidDimensions(rows, cols));
        }
        let mut table = BTreeMap::new();
        let mut total = Rational::zero();
        let mut seen_any = false;
        for (m, p) in pmf {
            seen_any = true;
            if m.dims() != (rows, cols) {
                return Err(LawError::PmfDimensions { matrix: m, rows, cols });
            }
            if !p.is_probability() {
                return Err(LawError::NotProbability(p));
            }
            total += &p;
            if table.contains_key(&m) {
                return Err(LawError::DuplicateMatrix(m));
            }
            table.insert(m, p);
        }
        if !seen_any {
            return Err(LawError::EmptyPmf);
        }
        if !total.is_one() {
            return Err(LawError::PmfSum(total));
        }
        table.retain(|_, p| !p.is_zero());
        Ok(Self::Explicit { rows, cols, pmf: table })
    }

    pub fn point_mass(m: BitMatrix) -> Self {
        let (rows, cols) = m.dims();
        let mut pmf = BTreeMap::new();
        pmf.insert(m, Rational::one());
        Self::Explicit { rows, cols, pmf }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Self::Bernoulli { p } => (p.len(), p[0].len()),
            Self::Explicit { rows, cols, .. } => (*rows, *cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.dims().0
    }

    pub fn cols(&self) -> usize {
        self.dims().1
    }

    pub fn probability(&self, m: &BitMatrix) -> Result<Rational, Gf2Error> {
        if m.dims() != self.dims() {
            return Err(Gf2Error::DimensionMismatch { left: m.dims(), right: self.dims() });
        }
        Ok(match self {
            Self::Bernoulli { p } => {
                let mut acc = Rational::one();
                for (j, row) in p.iter().enumerate() {
                    for (i, pji) in row.iter().enumerate() {
                        acc = if m.get(j, i) { acc * pji } else { acc * (Rational::one() - pji) };
                        if acc.is_zero() {
                            return Ok(acc);
                        }
                    }
                }
                acc
            }
            Self::Explicit { pmf, .. } => pmf.get(m).cloned().unwrap_or_else(Rational::zero),
        })
    }

    /// `Pr(entry (j, i) = 1)`, 0-based.
    pub fn marginal(&self, j: usize, i: usize) -> Rational {
        match self {
            Self::Bernoulli { p } => p[j][i].clone(),
            Self::Explicit { pmf, .. } => pmf.iter().filter(|(m, _)| m.get(j, i)).map(|(_, p)| p).sum(),
        }
    }

    /// The common entry probability when every entry is Bernoulli with the same `p`.
    pub fn common_p(&self) -> Option<Rational> {
        match self {
            Self::Bernoulli { p } => {
                let first = &p[0][0];
                p.iter().flatten().all(|x| x == first).then(|| first.clone())
            }
            Self::Explicit { .. } => None,
        }
    }

    /// Number of entries whose value is random. Exhaustive work scales with
    /// two to this power.
    pub fn free_bits(&self) -> usize {
        match self {
            Self::Bernoulli { p } => p.iter().flatten().filter(|x| !x.is_zero() && !x.is_one()).count(),
            Self::Explicit { rows, cols, .. } => rows * cols,
        }
    }

    /// Support of the law with probabilities, in enumeration order.
    ///
    /// For Bernoulli laws only the random entries are enumerated, so the cap
    /// applies to [`ChannelLaw::free_bits`] rather than to the full size.
    pub fn distribution(&self) -> Result<Vec<(BitMatrix, Rational)>, Gf2Error> {
        match self {
            Self::Explicit { rows, cols, pmf } => {
                if rows * cols <= 64 {
                    let mut v: Vec<_> = pmf.iter().map(|(m, p)| (m.clone(), p.clone())).collect();
                    v.sort_by_key(|(m, _)| m.to_code());
                    Ok(v)
                } else {
                    Ok(pmf.iter().map(|(m, p)| (m.clone(), p.clone())).collect())
                }
            }
            Self::Bernoulli { p } => {
                let (rows, cols) = self.dims();
                let mut base = BitMatrix::zeros(rows, cols);
                let mut free = Vec::new();
                for (j, row) in p.iter().enumerate() {
                    for (i, pji) in row.iter().enumerate() {
                        if pji.is_one() {
                            base.set(j, i, true);
                        } else if !pji.is_zero() {
                            free.push((j, i));
                        }
                    }
                }
                check_cap(free.len())?;
                let mut out = Vec::with_capacity(1 << free.len());
                for code in 0u64..(1u64 << free.len()) {
                    let mut m = base.clone();
                    let mut prob = Rational::one();
                    for (b, &(j, i)) in free.iter().enumerate() {
                        if (code >> b) & 1 == 1 {
                            m.set(j, i, true);
                            prob = prob * &p[j][i];
                        } else {
                            prob = prob * (Rational::one() - &p[j][i]);
                        }
                    }
                    out.push((m, prob));
                }
                if rows * cols <= 64 {
                    out.sort_by_key(|(m, _)| m.to_code());
                }
                Ok(out)
            }
        }
    }

    /// Marginal law of the submatrix on the given rows and columns.
    pub fn restrict(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Self, LawError> {
        match self {
            Self::Bernoulli { p } => {
                let entries = row_idx.iter().flat_map(|&j| col_idx.iter().map(move |&i| p[j][i].clone())).collect();
                Self::bernoulli_matrix(row_idx.len(), col_idx.len(), entries)
            }
            Self::Explicit { pmf, .. } => {
                let mut table: BTreeMap<BitMatrix, Rational> = BTreeMap::new();
                for (m, p) in pmf {
                    *table.entry(m.submatrix(row_idx, col_idx)).or_insert_with(Rational::zero) += p;
                }
                Ok(Self::Explicit { rows: row_idx.len(), cols: col_idx.len(), pmf: table })
            }
        }
    }

    /// Law of a `rows x cols` matrix assembled from independent blocks.
    /// Each block places its law's entry `(a, b)` at `(row_pos[a], col_pos[b])`;
    /// entries covered by no block are zero.
    pub fn assemble(rows: usize, cols: usize, blocks: &[LawBlock]) -> Result<Self, LawError> {
        if blocks.iter().all(|b| matches!(b.law, Self::Bernoulli { .. })) {
            let mut entries = vec![Rational::zero(); rows * cols];
            for b in blocks {
                for (a, &r) in b.row_pos.iter().enumerate() {
                    for (c, &s) in b.col_pos.iter().enumerate() {
                        entries[r * cols + s] = b.law.marginal(a, c);
                    }
                }
            }
            return Self::bernoulli_matrix(rows, cols, entries);
        }
        let mut acc: BTreeMap<BitMatrix, Rational> = BTreeMap::new();
        acc.insert(BitMatrix::zeros(rows, cols), Rational::one());
        for b in blocks {
            let dist = b.law.distribution()?;
            let mut next: BTreeMap<BitMatrix, Rational> = BTreeMap::new();
            for (base, pb) in &acc {
                for (m, pm) in &dist {
                    let mut out = base.clone();
                    for (a, &r) in b.row_pos.iter().enumerate() {
                        for (c, &s) in b.col_pos.iter().enumerate() {
                            if m.get(a, c) {
                                out.set(r, s, true);
                            }
                        }
                    }
                    *next.entry(out).or_insert_with(Rational::zero) += pb * pm;
                }
            }
            acc = next;
        }
        Self::explicit(rows, cols, acc)
    }
}

/// One independent block of an assembled law.
#[derive(Debug, Clone)]
pub struct LawBlock {
    pub law: ChannelLaw,
    pub row_pos: Vec<usize>,
    pub col_pos: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::enumerate_matrices;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn bernoulli_probabilities() {
        let uni = ChannelLaw::bernoulli_uniform(2, 2, q(1, 2)).unwrap();
        for m in enumerate_matrices(2, 2).unwrap() {
            assert_eq!(uni.probability(&m).unwrap(), q(1, 16));
        }
        let third = ChannelLaw::bernoulli_uniform(2, 2, q(1, 3)).unwrap();
        assert_eq!(third.probability(&BitMatrix::identity(2)).unwrap(), q(4, 81));
        let zero = ChannelLaw::bernoulli_uniform(2, 2, Rational::zero()).unwrap();
        assert_eq!(zero.probability(&BitMatrix::zeros(2, 2)).unwrap(), Rational::one());
        assert!(uni.probability(&BitMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn distributions_sum_to_one() {
        let law = ChannelLaw::bernoulli_matrix(2, 3, vec![q(1, 3), q(0, 1), q(1, 1), q(2, 7), q(1, 2), q(5, 9)]).unwrap();
        let d = law.distribution().unwrap();
        assert_eq!(d.len(), 16);
        assert_eq!(d.iter().map(|(_, p)| p).sum::<Rational>(), Rational::one());
        for (m, p) in &d {
            assert_eq!(&law.probability(m).unwrap(), p);
        }
        let total: Rational = enumerate_matrices(2, 3).unwrap().map(|m| law.probability(&m).unwrap()).sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn explicit_validation() {
        let i = BitMatrix::identity(2);
        let z = BitMatrix::zeros(2, 2);
        assert!(ChannelLaw::explicit(2, 2, vec![(i.clone(), q(1, 2)), (z.clone(), q(1, 2))]).is_ok());
        assert!(matches!(ChannelLaw::explicit(2, 2, vec![(i.clone(), q(1, 2))]), Err(LawError::PmfSum(_))));
        assert!(matches!(
            ChannelLaw::explicit(2, 2, vec![(i.clone(), q(1, 2)), (i.clone(), q(1, 2))]),
            Err(LawError::DuplicateMatrix(_))
        ));
        assert!(ChannelLaw::explicit(2, 2, vec![(BitMatrix::identity(3), Rational::one())]).is_err());
        assert!(ChannelLaw::bernoulli_uniform(2, 2, q(3, 2)).is_err());
    }

    #[test]
    fn marginals_and_restriction() {
        let a = BitMatrix::from_bit_rows(&["10", "01"]).unwrap();
        let b = BitMatrix::from_bit_rows(&["11", "00"]).unwrap();
        let law = ChannelLaw::explicit(2, 2, vec![(a, q(1, 4)), (b, q(3, 4))]).unwrap();
        assert_eq!(law.marginal(0, 0), Rational::one());
        assert_eq!(law.marginal(0, 1), q(3, 4));
        assert_eq!(law.marginal(1, 0), Rational::zero());
        let r = law.restrict(&[0], &[1]).unwrap();
        assert_eq!(r.probability(&BitMatrix::from_bit_rows(&["1"]).unwrap()).unwrap(), q(3, 4));
    }

    #[test]
    fn assemble_block_diagonal() {
        let a = ChannelLaw::bernoulli_uniform(1, 1, q(1, 3)).unwrap();
        let b = ChannelLaw::bernoulli_uniform(1, 1, q(3, 4)).unwrap();
        let blocks = [
            LawBlock { law: a.clone(), row_pos: vec![0], col_pos: vec![0] },
            LawBlock { law: b.clone(), row_pos: vec![1], col_pos: vec![1] },
        ];
        let law = ChannelLaw::assemble(2, 2, &blocks).unwrap();
        assert_eq!(law.marginal(0, 1), Rational::zero());
        assert_eq!(law.probability(&BitMatrix::identity(2)).unwrap(), q(1, 4));

        let one = BitMatrix::from_bit_rows(&["1"]).unwrap();
        let zero = BitMatrix::from_bit_rows(&["0"]).unwrap();
        let ea = ChannelLaw::explicit(1, 1, vec![(one.clone(), q(1, 3)), (zero.clone(), q(2, 3))]).unwrap();
        let blocks = [
            LawBlock { law: ea, row_pos: vec![0], col_pos: vec![0] },
            LawBlock { law: b, row_pos: vec![1], col_pos: vec![1] },
        ];
        let mixed = ChannelLaw::assemble(2, 2, &blocks).unwrap();
        for m in enumerate_matrices(2, 2).unwrap() {
            assert_eq!(mixed.probability(&m).unwrap(), law.probability(&m).unwrap());
        }
    }
}
