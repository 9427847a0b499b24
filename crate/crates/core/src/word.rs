//! Alphabet `Z_q`, words over it, and the symbol-sum homomorphism between
//! DeBruijn graphs of consecutive orders.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest alphabet with a single-character textual symbol (`0-9a-z`).
pub const MAX_TEXT_Q: usize = 36;

/// Alphabet size and window length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub q: usize,
    pub ell: usize,
}

impl Params {
    pub fn new(q: usize, ell: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("q = {q} must be at least 2")));
        }
        if ell < 1 {
            return Err(Error::InvalidParams(format!("ell = {ell} must be at least 1")));
        }
        if q > u8::MAX as usize + 1 {
            return Err(Error::InvalidParams(format!("q = {q} too large")));
        }
        checked_pow(q, ell)
            .ok_or_else(|| Error::InvalidParams(format!("q^ell overflows for q={q}, ell={ell}")))?;
        Ok(Params { q, ell })
    }

    /// Number of ell-words, `q^ell`.
    pub fn num_words(&self) -> usize {
        self.q.pow(self.ell as u32)
    }

    /// Number of (ell-1)-words, i.e. nodes of the graph whose edges are ell-words.
    pub fn num_nodes(&self) -> usize {
        self.q.pow(self.ell as u32 - 1)
    }

    pub fn word(&self, index: usize) -> Word {
        Word::from_index(self.q, self.ell, index)
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.num_words()).map(move |i| self.word(i))
    }

    /// Node (ell-1)-word an edge leaves from.
    pub(crate) fn edge_tail(&self, w: usize) -> usize {
        w / self.q
    }

    /// Node (ell-1)-word an edge enters.
    pub(crate) fn edge_head(&self, w: usize) -> usize {
        w % self.num_nodes()
    }

    /// Edge `v·sigma` leaving node `v`.
    pub(crate) fn out_edge(&self, v: usize, sigma: usize) -> usize {
        v * self.q + sigma
    }

    /// Edge `sigma·v` entering node `v`.
    pub(crate) fn in_edge(&self, v: usize, sigma: usize) -> usize {
        sigma * self.num_nodes() + v
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} ell={}", self.q, self.ell)
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn symbol_char(s: u8) -> char {
    std::char::from_digit(s as u32, MAX_TEXT_Q as u32).expect("symbol fits a base-36 digit")
}

pub fn char_symbol(c: char, q: usize) -> Result<u8> {
    let d = c
        .to_digit(MAX_TEXT_Q as u32)
        .ok_or_else(|| Error::parse(format!("invalid symbol character {c:?}")))? as usize;
    if d >= q {
        return Err(Error::SymbolOutOfRange { symbol: d, q });
    }
    Ok(d as u8)
}

/// Parses a q-ary digit string into symbols.
pub fn parse_symbols(text: &str, q: usize) -> Result<Vec<u8>> {
    text.trim().chars().map(|c| char_symbol(c, q)).collect()
}

pub fn format_symbols(symbols: &[u8]) -> String {
    symbols.iter().map(|&s| symbol_char(s)).collect()
}

/// A fixed-length word over `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: usize,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(q: usize, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= q) {
            return Err(Error::SymbolOutOfRange { symbol: s as usize, q });
        }
        Ok(Word { q, symbols })
    }

    pub fn parse(q: usize, text: &str) -> Result<Self> {
        Ok(Word { q, symbols: parse_symbols(text, q)? })
    }

    pub fn from_index(q: usize, len: usize, mut index: usize) -> Self {
        let mut symbols = vec![0u8; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q) as u8;
            index /= q;
        }
        Word { q, symbols }
    }

    /// Lexicographic index in `[0, q^len)`.
    pub fn index(&self) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * self.q + s as usize)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// True when the word has fewer than two distinct symbols.
    pub fn is_constant(&self) -> bool {
        self.symbols.windows(2).all(|p| p[0] == p[1])
    }

    fn with_prefix(&self, sigma: u8) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + 1);
        symbols.push(sigma);
        symbols.extend_from_slice(&self.symbols);
        Word { q: self.q, symbols }
    }

    fn with_suffix(&self, sigma: u8) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.push(sigma);
        Word { q: self.q, symbols }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.symbols))
    }
}

/// Parses words whose alphabet size is carried separately; `FromStr` assumes
/// the largest textual alphabet and callers re-check against their `q`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(MAX_TEXT_Q, s)
    }
}

/// The symbol-sum map `D(v) = (v0+v1, v1+v2, ..., v_{m-2}+v_{m-1})` over `Z_q`.
///
/// It is a `q`-to-1 graph homomorphism from the order-`m` DeBruijn graph onto
/// the order-`(m-1)` one.
pub fn homo_d(v: &Word) -> Result<Word> {
    if v.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "D needs a word of length at least 2, got {}",
            v.len()
        )));
    }
    let q = v.q;
    let symbols = v
        .symbols
        .windows(2)
        .map(|p| ((p[0] as usize + p[1] as usize) % q) as u8)
        .collect();
    Ok(Word { q, symbols })
}

/// The `q` preimages of `u` under [`homo_d`]; preimage `i` starts with symbol `i`.
pub fn homo_d_preimages(u: &Word) -> Vec<Word> {
    let q = u.q;
    (0..q)
        .map(|first| {
            let mut symbols = Vec::with_capacity(u.len() + 1);
            let mut prev = first;
            symbols.push(first as u8);
            for &s in &u.symbols {
                prev = (s as usize + q - prev) % q;
                symbols.push(prev as u8);
            }
            Word { q, symbols }
        })
        .collect()
}

/// Index-level `D` on words of length `len`.
pub(crate) fn homo_d_index(q: usize, len: usize, index: usize) -> usize {
    let w = Word::from_index(q, len, index);
    let mut acc = 0;
    for p in w.symbols.windows(2) {
        acc = acc * q + (p[0] as usize + p[1] as usize) % q;
    }
    acc
}

/// Index-level preimage of `u` (length `len`) starting with `first`.
pub(crate) fn homo_d_preimage_index(q: usize, len: usize, u: usize, first: usize) -> usize {
    let w = Word::from_index(q, len, u);
    let mut acc = first;
    let mut prev = first;
    for &s in &w.symbols {
        prev = (s as usize + q - prev) % q;
        acc = acc * q + prev;
    }
    acc
}

/// The words entering and leaving `v` in the next-order graph:
/// `({sigma v}, {v sigma})`. Rejects constant `v`, for which the two lists overlap.
pub fn t_neighborhood(v: &Word) -> Result<(Vec<Word>, Vec<Word>)> {
    if v.is_constant() {
        return Err(Error::ConstantWord(v.to_string()));
    }
    let q = v.q as u8;
    let ins = (0..q).map(|s| v.with_prefix(s)).collect();
    let outs = (0..q).map(|s| v.with_suffix(s)).collect();
    Ok((ins, outs))
}
