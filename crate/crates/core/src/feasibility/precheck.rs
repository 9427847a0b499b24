//! Monochromatic-matching test around a single node.
//!
//! Around node `v` the words `{sigma v}` enter and `{v sigma}` leave. If every
//! entering word can be paired with a strictly larger leaving word (green) or
//! every one with a strictly smaller leaving word (red), the in-sum and
//! out-sum at `v` cannot agree and the permutation is infeasible. Sorting the
//! words by rank and scoring +1 per entering and -1 per leaving word, a green
//! pairing exists iff every prefix sum is nonnegative; red is the mirror.

use std::fmt;

use crate::perm::RankPermutation;
use crate::word::{Params, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    /// Every entering word ranks below its partner.
    Green,
    /// Every entering word ranks above its partner.
    Red,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Green => "green",
            Color::Red => "red",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchingWitness {
    pub node: Word,
    pub color: Color,
}

impl fmt::Display for MatchingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matching node={} color={}", self.node, self.color)
    }
}

/// Ballot test on a sign sequence: `Some(Green)` when all prefix sums are
/// nonnegative, `Some(Red)` when all are nonpositive.
pub fn ballot_color(signs: impl IntoIterator<Item = i32>) -> Option<Color> {
    let (mut sum, mut min, mut max) = (0i32, 0i32, 0i32);
    for s in signs {
        sum += s;
        min = min.min(sum);
        max = max.max(sum);
    }
    if sum != 0 {
        None
    } else if min >= 0 {
        Some(Color::Green)
    } else if max <= 0 {
        Some(Color::Red)
    } else {
        None
    }
}

/// Color of the monochromatic matching at node `v`, if any.
///
/// For `ell >= 3` only non-constant nodes are tested. For `ell = 2` every node
/// is constant, and the self-loop `vv` appears on both sides of the balance
/// equation, so it is dropped and the remaining `q-1` words per side are tested.
pub fn node_color(pi: &RankPermutation, v: usize) -> Option<Color> {
    let params = pi.params();
    let q = params.q;
    let mut tagged: Vec<(usize, i32)> = Vec::with_capacity(2 * q);
    for sigma in 0..q {
        let w_in = params.in_edge(v, sigma);
        let w_out = params.out_edge(v, sigma);
        tagged.push((pi.rank(w_in), 1));
        tagged.push((pi.rank(w_out), -1));
    }
    if Word::from_index(q, params.ell - 1, v).is_constant() {
        if params.ell > 2 {
            return None;
        }
        // The loop word is both entering and leaving; it cancels.
        let looped = params.out_edge(v, v % q);
        let r = pi.rank(looped);
        tagged.retain(|&(rank, _)| rank != r);
    }
    tagged.sort_unstable();
    ballot_color(tagged.into_iter().map(|(_, s)| s))
}

/// First node, in lexicographic order, carrying a monochromatic matching.
pub fn matching_precheck(pi: &RankPermutation) -> Option<MatchingWitness> {
    let params: Params = pi.params();
    if params.ell < 2 {
        return None;
    }
    (0..params.num_nodes()).find_map(|v| {
        node_color(pi, v).map(|color| MatchingWitness {
            node: Word::from_index(params.q, params.ell - 1, v),
            color,
        })
    })
}
