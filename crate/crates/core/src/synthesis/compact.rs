//! Straight-line programs for very long circular strings.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::profile::{profile_of, ProfileVector};
use crate::word::Params;

/// A string built from literals, concatenation and repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Lit(Vec<u8>),
    Concat(Vec<Segment>),
    Repeat(Box<Segment>, BigUint),
}

/// A circular string over `Z_q` held as a [`Segment`] tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactString {
    q: usize,
    root: Segment,
    len: BigUint,
}

impl CompactString {
    pub fn new(q: usize, root: Segment) -> Self {
        let len = segment_len(&root);
        CompactString { q, root, len }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn root(&self) -> &Segment {
        &self.root
    }

    pub fn len(&self) -> BigUint {
        self.len.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_zero()
    }

    /// Spells the string out, unless it is longer than `limit`.
    pub fn materialize(&self, limit: usize) -> Option<Vec<u8>> {
        let n = self.len.to_usize().filter(|&n| n <= limit)?;
        let mut out = Vec::with_capacity(n);
        spell(&self.root, &mut out);
        Some(out)
    }

    /// Circular ell-profile, computed without expanding repetitions.
    pub fn profile(&self, ell: usize) -> Result<ProfileVector> {
        let params = Params::new(self.q, ell)?;
        if self.len < BigUint::from(ell) {
            let x = self.materialize(ell).expect("short string");
            return profile_of(&x, params);
        }
        let s = summarize(&self.root, params);
        let mut counts = s.counts;
        // Windows that wrap from the end back to the start.
        let mut wrap = s.tail.clone();
        wrap.extend_from_slice(&s.head);
        add_windows(&mut counts, &wrap, params);
        ProfileVector::new(params, counts)
    }
}

fn segment_len(s: &Segment) -> BigUint {
    match s {
        Segment::Lit(v) => BigUint::from(v.len()),
        Segment::Concat(parts) => parts.iter().map(segment_len).sum(),
        Segment::Repeat(inner, n) => segment_len(inner) * n,
    }
}

fn spell(s: &Segment, out: &mut Vec<u8>) {
    match s {
        Segment::Lit(v) => out.extend_from_slice(v),
        Segment::Concat(parts) => parts.iter().for_each(|p| spell(p, out)),
        Segment::Repeat(inner, n) => {
            let reps = n.to_usize().expect("bounded by materialize limit");
            let start = out.len();
            spell(inner, out);
            let unit = out.len() - start;
            for _ in 1..reps {
                out.extend_from_within(start..start + unit);
            }
            if reps == 0 {
                out.truncate(start);
            }
        }
    }
}

/// Linear window counts of a string plus its first and last `ell - 1` symbols.
#[derive(Clone)]
struct Summary {
    len: BigUint,
    counts: Vec<BigUint>,
    head: Vec<u8>,
    tail: Vec<u8>,
}

impl Summary {
    fn empty(params: Params) -> Self {
        Summary {
            len: BigUint::zero(),
            counts: vec![BigUint::zero(); params.num_words()],
            head: Vec::new(),
            tail: Vec::new(),
        }
    }

    fn literal(v: &[u8], params: Params) -> Self {
        let mut counts = vec![BigUint::zero(); params.num_words()];
        add_windows(&mut counts, v, params);
        let k = params.ell - 1;
        Summary {
            len: BigUint::from(v.len()),
            counts,
            head: v[..k.min(v.len())].to_vec(),
            tail: v[v.len().saturating_sub(k)..].to_vec(),
        }
    }

    fn concat(&self, other: &Summary, params: Params) -> Summary {
        if self.len.is_zero() {
            return other.clone();
        }
        if other.len.is_zero() {
            return self.clone();
        }
        let k = params.ell - 1;
        let mut counts: Vec<BigUint> =
            self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        // Each window here necessarily straddles the junction.
        let mut seam = self.tail.clone();
        seam.extend_from_slice(&other.head);
        add_windows(&mut counts, &seam, params);
        let mut head = self.head.clone();
        if head.len() < k {
            head.extend(other.head.iter().take(k - head.len()));
        }
        let mut tail = other.tail.clone();
        if tail.len() < k {
            let need = k - tail.len();
            let mut pre = self.tail[self.tail.len().saturating_sub(need)..].to_vec();
            pre.extend_from_slice(&tail);
            tail = pre;
        }
        Summary { len: &self.len + &other.len, counts, head, tail }
    }

    fn power(&self, n: &BigUint, params: Params) -> Summary {
        let mut result = Summary::empty(params);
        let mut base = self.clone();
        for bit in 0..n.bits() {
            if n.bit(bit) {
                result = result.concat(&base, params);
            }
            if bit + 1 < n.bits() {
                base = base.concat(&base, params);
            }
        }
        result
    }
}

fn add_windows(counts: &mut [BigUint], v: &[u8], params: Params) {
    let ell = params.ell;
    if v.len() < ell {
        return;
    }
    for window in v.windows(ell) {
        let idx = window.iter().fold(0usize, |acc, &s| acc * params.q + s as usize);
        counts[idx] += 1u32;
    }
}

fn summarize(s: &Segment, params: Params) -> Summary {
    match s {
        Segment::Lit(v) => Summary::literal(v, params),
        Segment::Concat(parts) => parts
            .iter()
            .fold(Summary::empty(params), |acc, p| acc.concat(&summarize(p, params), params)),
        Segment::Repeat(inner, n) => summarize(inner, params).power(n, params),
    }
}
