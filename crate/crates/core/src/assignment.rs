//! Maximum-weight bipartite matching with exact rational weights
//! (Hungarian algorithm with potentials).

use crate::rational::Rational;

/// A maximum-weight matching: `pairs[i] = (row, col)`, listed by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub total: Rational,
}

/// Maximum-weight matching on a `rows x cols` weight table. `None` marks a
/// forbidden pair. Pairs with zero weight are dropped from the result.
pub fn max_weight_matching(weights: &[Vec<Option<Rational>>]) -> Matching {
    let rows = weights.len();
    let cols = weights.first().map_or(0, |r| r.len());
    let n = rows.max(cols);
    if n == 0 {
        return Matching { pairs: Vec::new(), total: Rational::zero() };
    }
    // Minimise cost = -weight on an n x n table; missing entries cost 0.
    let cost = |i: usize, j: usize| -> Rational {
        match weights.get(i).and_then(|r| r.get(j)).and_then(|w| w.as_ref()) {
            Some(w) if w.is_positive() => -w.clone(),
            _ => Rational::zero(),
        }
    };

    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] = &v[j] - &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m = &*m - &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs = Vec::new();
    let mut total = Rational::zero();
    for j in 1..=n {
        let i = p[j];
        if i == 0 || i > rows || j > cols {
            continue;
        }
        if let Some(w) = &weights[i - 1][j - 1] {
            if w.is_positive() {
                total += w;
                pairs.push((i - 1, j - 1));
            }
        }
    }
    pairs.sort();
    Matching { pairs, total }
}
