//! Kendall-tau distance and the composition operators that give encoder
//! outputs a minimum-distance guarantee.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigUint;
use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::encoder::{InfoVecA, InfoVecB, Repository, StageA};
use crate::error::{Error, Result};
use crate::perm::RankPermutation;

/// Longest input accepted by the breadth-first distance search.
pub const BFS_MAX_LEN: usize = 10;

/// Largest code built by the composition operators.
pub const MAX_CODE_SIZE: usize = 1 << 20;

fn same_multiset<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Minimum number of adjacent transpositions taking `a` to `b`.
///
/// Inversion count when symbols are distinct, the sorted-positions formula for
/// two-symbol words, breadth-first search otherwise.
pub fn kendall_tau<T: Ord + Clone + Hash>(a: &[T], b: &[T]) -> Result<u64> {
    if a.len() != b.len() || !same_multiset(a, b) {
        return Err(Error::MultisetMismatch);
    }
    let distinct: HashSet<&T> = a.iter().collect();
    if distinct.len() == a.len() {
        let pos: HashMap<&T, usize> = b.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mapped: Vec<usize> = a.iter().map(|s| pos[s]).collect();
        return Ok(inversions(&mapped));
    }
    if distinct.len() <= 2 {
        let first = a.iter().min().expect("nonempty");
        let ones = |x: &[T]| x.iter().enumerate().filter(|(_, s)| *s != first).map(|(i, _)| i).collect::<Vec<_>>();
        return Ok(ones(a).iter().zip(ones(b)).map(|(&i, j)| i.abs_diff(j) as u64).sum());
    }
    kendall_tau_bfs(a, b)
}

/// Breadth-first search over adjacent transpositions; inputs up to [`BFS_MAX_LEN`].
pub fn kendall_tau_bfs<T: Ord + Clone + Hash>(a: &[T], b: &[T]) -> Result<u64> {
    if a.len() != b.len() || !same_multiset(a, b) {
        return Err(Error::MultisetMismatch);
    }
    if a.len() > BFS_MAX_LEN {
        return Err(Error::CapExceeded(format!("length {} exceeds {BFS_MAX_LEN}", a.len())));
    }
    let mut seen: HashSet<Vec<T>> = HashSet::from([a.to_vec()]);
    let mut queue = VecDeque::from([(a.to_vec(), 0u64)]);
    while let Some((x, d)) = queue.pop_front() {
        if x == b {
            return Ok(d);
        }
        for i in 0..x.len().saturating_sub(1) {
            if x[i] == x[i + 1] {
                continue;
            }
            let mut y = x.clone();
            y.swap(i, i + 1);
            if seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    Err(Error::Internal("search ended without reaching the target".into()))
}

fn inversions(v: &[usize]) -> u64 {
    let mut count = 0;
    for i in 0..v.len() {
        count += v[i + 1..].iter().filter(|&&x| x < v[i]).count() as u64;
    }
    count
}

/// Distance between two rank permutations of the same words.
pub fn permutation_distance(a: &RankPermutation, b: &RankPermutation) -> Result<u64> {
    if a.params() != b.params() {
        return Err(Error::Dimension(format!("{} vs {}", a.params(), b.params())));
    }
    let pos_b = b.ranks();
    let mapped: Vec<usize> = a.order().iter().map(|&w| pos_b[w]).collect();
    Ok(inversions(&mapped))
}

/// Minimum pairwise distance; `None` for fewer than two words (infinite).
fn min_distance<W: Sync>(words: &[W], dist: impl Fn(&W, &W) -> u64 + Sync) -> Option<u64> {
    (0..words.len())
        .into_par_iter()
        .filter_map(|i| words[i + 1..].iter().map(|w| dist(&words[i], w)).min())
        .min()
}

/// A set of permutations of a common ground set of symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermCode {
    ground: Vec<u32>,
    words: Vec<Vec<u32>>,
    distance: Option<u64>,
}

impl PermCode {
    pub fn new(words: Vec<Vec<u32>>) -> Result<Self> {
        let first = words.first().ok_or_else(|| Error::Dimension("empty code".into()))?;
        let mut ground = first.clone();
        ground.sort_unstable();
        if ground.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::NotAPermutation("repeated symbol".into()));
        }
        let mut seen = HashSet::new();
        for w in &words {
            let mut s = w.clone();
            s.sort_unstable();
            if s != ground {
                return Err(Error::MultisetMismatch);
            }
            if !seen.insert(w) {
                return Err(Error::Dimension("repeated codeword".into()));
            }
        }
        let distance = min_distance(&words, |a, b| kendall_tau(a, b).expect("same ground"));
        Ok(PermCode { ground, words, distance })
    }

    /// All permutations of `ground`.
    pub fn full(ground: &[u32]) -> Result<Self> {
        let mut w = ground.to_vec();
        w.sort_unstable();
        let mut words = vec![w.clone()];
        while crate::perm::next_permutation(&mut w) {
            words.push(w.clone());
            if words.len() > MAX_CODE_SIZE {
                return Err(Error::CapExceeded("full symmetric group too large".into()));
            }
        }
        PermCode::new(words)
    }

    pub fn singleton(word: Vec<u32>) -> Result<Self> {
        PermCode::new(vec![word])
    }

    pub fn ground(&self) -> &[u32] {
        &self.ground
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Minimum Kendall-tau distance; `None` means infinite.
    pub fn min_distance(&self) -> Option<u64> {
        self.distance
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.iter().any(|x| x == w)
    }

    pub fn to_text(&self) -> String {
        self.words
            .iter()
            .map(|w| w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",") + "\n")
            .collect()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split(',').map(|t| t.trim().parse::<u32>().map_err(Error::parse)).collect())
            .collect::<Result<Vec<_>>>()?;
        PermCode::new(words)
    }
}

/// A set of binary words of one length and Hamming weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CWBinaryCode {
    n: usize,
    w: usize,
    words: Vec<Vec<bool>>,
    distance: Option<u64>,
}

impl CWBinaryCode {
    pub fn new(n: usize, w: usize, words: Vec<Vec<bool>>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Dimension("empty code".into()));
        }
        let mut seen = HashSet::new();
        for x in &words {
            if x.len() != n || x.iter().filter(|&&b| b).count() != w {
                return Err(Error::Dimension(format!("codeword is not of length {n} and weight {w}")));
            }
            if !seen.insert(x) {
                return Err(Error::Dimension("repeated codeword".into()));
            }
        }
        let distance = min_distance(&words, |a, b| kendall_tau(a, b).expect("same weight"));
        Ok(CWBinaryCode { n, w, words, distance })
    }

    /// Every word of length `n` and weight `w`.
    pub fn full(n: usize, w: usize) -> Result<Self> {
        let mut words = Vec::new();
        let mut x: Vec<bool> = (0..n).map(|i| i >= n - w).collect();
        loop {
            words.push(x.clone());
            if words.len() > MAX_CODE_SIZE {
                return Err(Error::CapExceeded("constant-weight code too large".into()));
            }
            if !crate::perm::next_permutation(&mut x) {
                break;
            }
        }
        CWBinaryCode::new(n, w, words)
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.w
    }

    pub fn words(&self) -> &[Vec<bool>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_distance(&self) -> Option<u64> {
        self.distance
    }

    pub fn contains(&self, x: &[bool]) -> bool {
        self.words.iter().any(|w| w == x)
    }
}

/// `min` with `None` read as infinity.
pub fn min_opt(values: impl IntoIterator<Item = Option<u64>>) -> Option<u64> {
    values.into_iter().flatten().min()
}

/// Interleavings of codewords of `ca` and `cb` along the patterns of `d`,
/// where ones take symbols of `ca`.
pub fn star_d(ca: &PermCode, cb: &PermCode, d: &CWBinaryCode) -> Result<PermCode> {
    if ca.ground().iter().any(|s| cb.ground().binary_search(s).is_ok()) {
        return Err(Error::Dimension("ground sets overlap".into()));
    }
    if d.length() != ca.ground().len() + cb.ground().len() || d.weight() != ca.ground().len() {
        return Err(Error::Dimension(format!(
            "pattern code has length {} and weight {}, expected {} and {}",
            d.length(),
            d.weight(),
            ca.ground().len() + cb.ground().len(),
            ca.ground().len()
        )));
    }
    if ca.len() * cb.len() * d.len() > MAX_CODE_SIZE {
        return Err(Error::CapExceeded("product code too large".into()));
    }
    let mut words = Vec::with_capacity(ca.len() * cb.len() * d.len());
    for a in ca.words() {
        for b in cb.words() {
            for t in d.words() {
                words.push(crate::encoder::interleave(t, a, b)?);
            }
        }
    }
    PermCode::new(words)
}

/// Restrictions to `a_ground` and its complement, and the membership pattern.
pub fn split_star(pi: &[u32], a_ground: &[u32]) -> (Vec<u32>, Vec<u32>, Vec<bool>) {
    let in_a = |s: &u32| a_ground.contains(s);
    let a = pi.iter().copied().filter(in_a).collect();
    let b = pi.iter().copied().filter(|s| !in_a(s)).collect();
    let f = pi.iter().map(in_a).collect();
    (a, b, f)
}

/// Replaces slot symbol `slots[i]` in every codeword of `outer` by every
/// codeword of `inner[i]`.
pub fn h_compose(inner: &[PermCode], slots: &[u32], outer: &PermCode) -> Result<PermCode> {
    if inner.len() != slots.len() {
        return Err(Error::Dimension("one slot per inner code".into()));
    }
    let mut code = outer.clone();
    for (c, &b) in inner.iter().zip(slots) {
        if !code.ground().contains(&b) {
            return Err(Error::Dimension(format!("slot {b} absent from the outer code")));
        }
        if c.ground().iter().any(|s| code.ground().contains(s)) {
            return Err(Error::Dimension("inner ground set overlaps".into()));
        }
        if code.len() * c.len() > MAX_CODE_SIZE {
            return Err(Error::CapExceeded("composed code too large".into()));
        }
        let mut words = Vec::with_capacity(code.len() * c.len());
        for v in code.words() {
            for u in c.words() {
                let mut w = Vec::with_capacity(v.len() + u.len() - 1);
                for &s in v {
                    if s == b {
                        w.extend_from_slice(u);
                    } else {
                        w.push(s);
                    }
                }
                words.push(w);
            }
        }
        code = PermCode::new(words)?;
    }
    Ok(code)
}

fn stage_word(pi: &[usize]) -> Vec<u32> {
    pi.iter().map(|&r| r as u32).collect()
}

/// Message space of the `ell = 2` encoder restricted to component codes.
#[derive(Debug, Clone)]
pub struct PrecodedA {
    /// Repository indices allowed as the base.
    pub base: Vec<usize>,
    /// Per stage `j = 4..=q`: a code on `1..=j` and a weight-`j` pattern code.
    pub stages: Vec<(PermCode, CWBinaryCode)>,
    /// Guaranteed minimum distance of the encoded permutations; `None` is infinite.
    pub bound: Option<u64>,
}

pub fn precoded_info_a(base: Vec<usize>, stages: Vec<(PermCode, CWBinaryCode)>, repo: &Repository) -> Result<PrecodedA> {
    if base.is_empty() {
        return Err(Error::Dimension("empty base code".into()));
    }
    let perms = base.iter().map(|&i| repo.permutation(i)).collect::<Result<Vec<_>>>()?;
    let d3 = min_distance(&perms, |a, b| permutation_distance(a, b).expect("same params"));
    for (k, (c, b)) in stages.iter().enumerate() {
        let j = k + 4;
        let ground: Vec<u32> = (1..=j as u32).collect();
        if c.ground() != ground.as_slice() || b.length() != j * j - j + 1 || b.weight() != j {
            return Err(Error::Dimension(format!("stage {j} codes have the wrong shape")));
        }
    }
    let bound = min_opt(
        std::iter::once(d3).chain(stages.iter().flat_map(|(c, b)| [c.min_distance(), b.min_distance()])),
    );
    Ok(PrecodedA { base, stages, bound })
}

impl PrecodedA {
    pub fn q(&self) -> usize {
        3 + self.stages.len()
    }

    pub fn size(&self) -> BigUint {
        self.stages
            .iter()
            .fold(BigUint::from(self.base.len()), |n, (c, b)| n * c.len() * b.len())
    }

    pub fn contains(&self, v: &InfoVecA) -> bool {
        v.q() == self.q()
            && self.base.contains(&v.base)
            && v.stages.iter().zip(&self.stages).all(|(s, (c, b))| c.contains(&stage_word(&s.pi)) && b.contains(&s.t))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> InfoVecA {
        let stages = self
            .stages
            .iter()
            .map(|(c, b)| StageA {
                pi: c.words().choose(rng).expect("nonempty").iter().map(|&s| s as usize).collect(),
                t: b.words().choose(rng).expect("nonempty").clone(),
            })
            .collect();
        InfoVecA { base: *self.base.choose(rng).expect("nonempty"), stages }
    }

    /// Every message, in mixed-radix order.
    pub fn enumerate(&self) -> Result<Vec<InfoVecA>> {
        let total = self.size();
        if total > BigUint::from(MAX_CODE_SIZE) {
            return Err(Error::CapExceeded(format!("{total} messages")));
        }
        let mut out: Vec<InfoVecA> = self.base.iter().map(|&b| InfoVecA { base: b, stages: vec![] }).collect();
        for (c, b) in &self.stages {
            out = out
                .into_iter()
                .flat_map(|v| {
                    c.words().iter().flat_map(move |p| {
                        let v = v.clone();
                        b.words().iter().map(move |t| {
                            let mut v = v.clone();
                            v.stages.push(StageA { pi: p.iter().map(|&s| s as usize).collect(), t: t.clone() });
                            v
                        })
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// Message space of the general encoder with the top layer restricted to `code`.
#[derive(Debug, Clone)]
pub struct PrecodedB {
    pub q: usize,
    pub ell: usize,
    pub code: PermCode,
    pub bound: Option<u64>,
}

pub fn precoded_info_b(q: usize, ell: usize, code: PermCode) -> Result<PrecodedB> {
    if ell < 3 {
        return Err(Error::InvalidParams("the top layer exists only for ell >= 3".into()));
    }
    let ground: Vec<u32> = (0..q as u32).collect();
    if code.ground() != ground.as_slice() {
        return Err(Error::Dimension(format!("code must permute 0..{q}")));
    }
    let bound = code.min_distance();
    Ok(PrecodedB { q, ell, code, bound })
}

impl PrecodedB {
    pub fn contains(&self, v: &InfoVecB) -> bool {
        v.q() == self.q
            && v.ell() == self.ell
            && v.layers.last().is_some_and(|top| {
                top.iter().all(|p| self.code.contains(&p.iter().map(|&s| s as u32).collect::<Vec<_>>()))
            })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> InfoVecB {
        let mut v = InfoVecB::random(self.q, self.ell, rng);
        for p in v.layers.last_mut().expect("ell >= 3") {
            *p = self.code.words().choose(rng).expect("nonempty").iter().map(|&s| s as u8).collect();
        }
        v
    }
}
