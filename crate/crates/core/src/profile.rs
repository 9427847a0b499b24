//! Circular ell-profile vectors and flow conservation.

use std::fmt::Write as _;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{format_symbols, parse_symbols, Params, Word};

/// Count of every ell-word in a circular string, indexed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProfileVector {
    params: Params,
    counts: Vec<BigUint>,
}

impl ProfileVector {
    pub fn new(params: Params, counts: Vec<BigUint>) -> Result<Self> {
        if counts.len() != params.num_words() {
            return Err(Error::LengthMismatch { expected: params.num_words(), got: counts.len() });
        }
        Ok(ProfileVector { params, counts })
    }

    pub fn from_u64(params: Params, counts: &[u64]) -> Result<Self> {
        Self::new(params, counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn zeros(params: Params) -> Self {
        ProfileVector { params, counts: vec![BigUint::zero(); params.num_words()] }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<BigUint> {
        self.counts
    }

    pub fn get(&self, w: &Word) -> &BigUint {
        &self.counts[w.index()]
    }

    /// Sum of all entries; equals the length of any generating circular string.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Counts as `u64`, when they all fit.
    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(|c| c.to_u64()).collect()
    }

    pub fn is_flow_conserving(&self) -> Result<bool> {
        Ok(self.flow_violation()?.is_none())
    }

    /// First (ell-1)-word, in lexicographic order, whose in- and out-sums differ.
    pub fn flow_violation(&self) -> Result<Option<Word>> {
        if self.params.ell < 2 {
            return Err(Error::NoFlowConstraints);
        }
        Ok(flow_violation(self.params, &self.counts)
            .map(|v| Word::from_index(self.params.q, self.params.ell - 1, v)))
    }

    /// Text form: a `q=.. ell=..` header, then `word count` per line in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.params);
        for (i, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{} {}", self.params.word(i), c);
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty profile"))?;
        let params = parse_params_header(header)?;
        let mut counts = vec![None; params.num_words()];
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(word), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(format!("bad profile line {line:?}")));
            };
            let w = Word::parse(params.q, word)?;
            if w.len() != params.ell {
                return Err(Error::parse(format!("word {word} has wrong length")));
            }
            let c: BigUint = count.parse().map_err(|_| Error::parse(format!("bad count {count:?}")))?;
            let slot = &mut counts[w.index()];
            if slot.is_some() {
                return Err(Error::parse(format!("duplicate word {word}")));
            }
            *slot = Some(c);
        }
        let counts = counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::parse(format!("missing word {}", params.word(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, counts)
    }
}

/// Parses a `q=<q> ell=<ell>` header line.
pub fn parse_params_header(line: &str) -> Result<Params> {
    let mut q = None;
    let mut ell = None;
    for tok in line.split_whitespace() {
        match tok.split_once('=') {
            Some(("q", v)) => q = v.parse().ok(),
            Some(("ell", v)) => ell = v.parse().ok(),
            _ => return Err(Error::parse(format!("bad header token {tok:?}"))),
        }
    }
    match (q, ell) {
        (Some(q), Some(ell)) => Params::new(q, ell),
        _ => Err(Error::parse(format!("header {line:?} needs q= and ell="))),
    }
}

/// Circular ell-profile of `x`.
pub fn profile_of(x: &[u8], params: Params) -> Result<ProfileVector> {
    if x.is_empty() {
        return Err(Error::InvalidParams("empty string has no profile".into()));
    }
    let counts = window_counts(x, params)?;
    Ok(ProfileVector { params, counts: counts.into_iter().map(BigUint::from).collect() })
}

/// Circular window counts as plain integers.
pub(crate) fn window_counts(x: &[u8], params: Params) -> Result<Vec<u64>> {
    let Params { q, ell } = params;
    if let Some(&s) = x.iter().find(|&&s| s as usize >= q) {
        return Err(Error::SymbolOutOfRange { symbol: s as usize, q });
    }
    let n = x.len();
    let modulus = params.num_words();
    let mut counts = vec![0u64; modulus];
    // Rolling index of the window starting at i.
    let mut idx = 0usize;
    for k in 0..ell {
        idx = idx * q + x[k % n] as usize;
    }
    for i in 0..n {
        counts[idx] += 1;
        idx = (idx * q + x[(i + ell) % n] as usize) % modulus;
    }
    Ok(counts)
}

/// Index of the first node whose in-sum differs from its out-sum.
pub(crate) fn flow_violation<T>(params: Params, values: &[T]) -> Option<usize>
where
    T: Clone + Zero + PartialEq,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    (0..params.num_nodes()).find(|&v| {
        let (ins, outs) = node_sums(params, values, v);
        ins != outs
    })
}

pub(crate) fn node_sums<T>(params: Params, values: &[T], v: usize) -> (T, T)
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let mut ins = T::zero();
    let mut outs = T::zero();
    for sigma in 0..params.q {
        ins = &ins + &values[params.in_edge(v, sigma)];
        outs = &outs + &values[params.out_edge(v, sigma)];
    }
    (ins, outs)
}

/// Rotates a circular string left by `k`.
pub fn rotate(x: &[u8], k: usize) -> Vec<u8> {
    if x.is_empty() {
        return Vec::new();
    }
    let k = k % x.len();
    x[k..].iter().chain(&x[..k]).copied().collect()
}

/// Parses a circular string in q-ary digit text.
pub fn parse_string(text: &str, q: usize) -> Result<Vec<u8>> {
    parse_symbols(text, q)
}

pub fn format_string(x: &[u8]) -> String {
    format_symbols(x)
}

/// Maps the DNA letters `A, C, G, T` to `0, 1, 2, 3`.
pub fn dna_to_symbols(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| match c {
            'A' => Ok(0),
            'C' => Ok(1),
            'G' => Ok(2),
            'T' => Ok(3),
            _ => Err(Error::parse(format!("not a DNA letter: {c:?}"))),
        })
        .collect()
}
