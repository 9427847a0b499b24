//! Rank permutations on `Sigma^ell`.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Params, Word};

/// A total order on the ell-words, stored as a rank per word (1 = least frequent).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankPermutation {
    params: Params,
    rank: Vec<usize>,
}

impl RankPermutation {
    /// Builds from ranks indexed by word; ranks must be a bijection onto `1..=q^ell`.
    pub fn from_ranks(params: Params, rank: Vec<usize>) -> Result<Self> {
        let n = params.num_words();
        if rank.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: rank.len() });
        }
        let mut seen = vec![false; n];
        for &r in &rank {
            if r == 0 || r > n || std::mem::replace(&mut seen[r - 1], true) {
                return Err(Error::NotAPermutation(format!("rank {r} invalid or repeated")));
            }
        }
        Ok(RankPermutation { params, rank })
    }

    /// Builds from the word indices listed least-frequent first.
    pub fn from_order(params: Params, order: &[usize]) -> Result<Self> {
        let n = params.num_words();
        if order.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: order.len() });
        }
        let mut rank = vec![0; n];
        for (pos, &w) in order.iter().enumerate() {
            if w >= n || rank[w] != 0 {
                return Err(Error::NotAPermutation(format!("word index {w} invalid or repeated")));
            }
            rank[w] = pos + 1;
        }
        Ok(RankPermutation { params, rank })
    }

    pub fn identity(params: Params) -> Self {
        RankPermutation { params, rank: (1..=params.num_words()).collect() }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn rank(&self, w: usize) -> usize {
        self.rank[w]
    }

    /// Word indices in ascending rank order.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.rank.len()];
        for (w, &r) in self.rank.iter().enumerate() {
            order[r - 1] = w;
        }
        order
    }

    /// Comma-separated words, least frequent first.
    pub fn to_text(&self) -> String {
        self.order()
            .into_iter()
            .map(|w| self.params.word(w).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_text(params: Params, text: &str) -> Result<Self> {
        let order = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|tok| {
                let w = Word::parse(params.q, tok.trim())?;
                if w.len() != params.ell {
                    return Err(Error::parse(format!("word {tok:?} has wrong length")));
                }
                Ok(w.index())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_order(params, &order)
    }
}

impl fmt::Display for RankPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// True iff the values are pairwise distinct and ascend in the order of `pi`.
pub fn satisfies<T: PartialOrd>(values: &[T], pi: &RankPermutation) -> bool {
    if values.len() != pi.rank.len() {
        return false;
    }
    let order = pi.order();
    order.windows(2).all(|p| values[p[0]] < values[p[1]])
}

/// The permutation induced by distinct values.
pub fn rank_of<T: Ord>(params: Params, values: &[T]) -> Result<RankPermutation> {
    let n = params.num_words();
    if values.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: values.len() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if let Some(p) = order.windows(2).find(|p| values[p[0]] == values[p[1]]) {
        return Err(Error::Tie(params.word(p[0]).to_string(), params.word(p[1]).to_string()));
    }
    RankPermutation::from_order(params, &order)
}

/// Advances `a` to its lexicographic successor; false when `a` was the last permutation.
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
