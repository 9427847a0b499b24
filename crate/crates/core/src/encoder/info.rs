//! Information vectors for both encoders, their text form and mixed-radix ranks.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::math::{binomial, factorial};
use crate::oracle::lex_rank;
use crate::word::{format_symbols, parse_symbols, Word};

/// Number of feasible permutations at `(q, ell) = (3, 2)`.
pub const F32: usize = 30240;

/// One recursive stage of the `ell = 2` encoder, for alphabet size `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StageA {
    /// `pi[i]` is the rank (1-based) of `y_i` among the new entries.
    pub pi: Vec<usize>,
    /// Interleaving pattern of length `j^2 - j + 1` and weight `j`; ones mark new entries.
    pub t: Vec<bool>,
}

impl StageA {
    pub fn alphabet(&self) -> usize {
        self.pi.len()
    }

    fn validate(&self, j: usize) -> Result<()> {
        if self.pi.len() != j {
            return Err(Error::MalformedInfo(format!("stage {j}: pi has length {}", self.pi.len())));
        }
        let mut seen = vec![false; j + 1];
        for &r in &self.pi {
            if r == 0 || r > j || std::mem::replace(&mut seen[r], true) {
                return Err(Error::MalformedInfo(format!("stage {j}: pi is not a permutation of 1..={j}")));
            }
        }
        if self.t.len() != j * j - j + 1 {
            return Err(Error::MalformedInfo(format!(
                "stage {j}: t has length {}, expected {}",
                self.t.len(),
                j * j - j + 1
            )));
        }
        let weight = self.t.iter().filter(|&&b| b).count();
        if weight != j {
            return Err(Error::MalformedInfo(format!("stage {j}: t has weight {weight}, expected {j}")));
        }
        Ok(())
    }
}

/// Message for the `ell = 2` encoder: a repository index and one stage per `j = 4..=q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfoVecA {
    /// Repository index in `1..=30240`.
    pub base: usize,
    pub stages: Vec<StageA>,
}

impl InfoVecA {
    pub fn new(base: usize, stages: Vec<StageA>) -> Result<Self> {
        let v = InfoVecA { base, stages };
        v.validate()?;
        Ok(v)
    }

    pub fn q(&self) -> usize {
        3 + self.stages.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=F32).contains(&self.base) {
            return Err(Error::MalformedInfo(format!("base {} outside 1..={F32}", self.base)));
        }
        for (k, s) in self.stages.iter().enumerate() {
            s.validate(k + 4)?;
        }
        Ok(())
    }

    pub fn random<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Self {
        let stages = (4..=q).map(|j| random_stage(j, rng)).collect();
        InfoVecA { base: rng.random_range(1..=F32), stages }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q={} ell=2\n", self.q());
        self.write_body(&mut out);
        out
    }

    fn write_body(&self, out: &mut String) {
        writeln!(out, "base={}", self.base).expect("string write");
        for s in &self.stages {
            let pi: Vec<String> = s.pi.iter().map(|r| r.to_string()).collect();
            let t: String = s.t.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(out, "pi={} t={}", pi.join(","), t).expect("string write");
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let (q, ell, lines) = header(text)?;
        if ell != 2 {
            return Err(Error::parse(format!("expected ell=2, got ell={ell}")));
        }
        let (v, rest) = parse_a_body(q, &lines)?;
        if let Some(line) = rest.first() {
            return Err(Error::parse(format!("unexpected line {line:?}")));
        }
        Ok(v)
    }

    /// Mixed-radix digits, most significant first: base, then per stage `pi` and `t`.
    fn radices(q: usize) -> Vec<BigUint> {
        let mut r = vec![BigUint::from(F32)];
        for j in 4..=q as u64 {
            r.push(factorial(j));
            r.push(binomial(j * j - j + 1, j));
        }
        r
    }

    /// Size of the message space `I_q`.
    pub fn space_size(q: usize) -> BigUint {
        Self::radices(q).iter().product()
    }

    pub fn to_index(&self) -> BigUint {
        let digits = self.digits();
        mixed_radix_encode(&digits, &Self::radices(self.q()))
    }

    fn digits(&self) -> Vec<BigUint> {
        let mut d = vec![BigUint::from(self.base - 1)];
        for s in &self.stages {
            let order: Vec<usize> = s.pi.iter().map(|r| r - 1).collect();
            d.push(BigUint::from(lex_rank(&order)));
            d.push(combination_rank(&s.t));
        }
        d
    }

    pub fn from_index(q: usize, index: &BigUint) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidParams(format!("q = {q} is below 3")));
        }
        let digits = mixed_radix_decode(index, &Self::radices(q))?;
        let base = digits[0].to_usize().expect("below F32") + 1;
        let stages = (4..=q)
            .enumerate()
            .map(|(k, j)| {
                let order = unrank_permutation(j, digits[1 + 2 * k].to_usize().expect("below j!"));
                StageA {
                    pi: order.iter().map(|r| r + 1).collect(),
                    t: combination_unrank(j * j - j + 1, j, &digits[2 + 2 * k]),
                }
            })
            .collect();
        InfoVecA::new(base, stages)
    }
}

fn random_stage<R: Rng + ?Sized>(j: usize, rng: &mut R) -> StageA {
    let mut pi: Vec<usize> = (1..=j).collect();
    pi.shuffle(rng);
    let mut t = vec![false; j * j - j + 1];
    for i in rand::seq::index::sample(rng, t.len(), j) {
        t[i] = true;
    }
    StageA { pi, t }
}

/// Words of `Z_q^(i-1)` whose first and last symbols are nonzero, in lexicographic order.
pub fn layer_domain(q: usize, i: usize) -> Vec<Word> {
    let len = i - 1;
    let count = q.pow(len as u32);
    (0..count)
        .map(|k| Word::from_index(q, len, k))
        .filter(|w| w.symbols()[0] != 0 && w.symbols()[len - 1] != 0)
        .collect()
}

/// `|A_i| = q^(i-1) - 2 q^(i-2) + q^(i-3)`.
pub fn layer_domain_size(q: usize, i: usize) -> usize {
    let q = q as i64;
    let i = i as u32;
    (q.pow(i - 1) - 2 * q.pow(i - 2) + q.pow(i - 3)) as usize
}

/// Message for the general encoder: an `InfoVecA` and one layer per `i = 3..=ell`.
///
/// `layers[i-3][k]` is the permutation of `Z_q`, in one-line form, assigned to
/// the `k`-th word of [`layer_domain`]`(q, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfoVecB {
    pub base: InfoVecA,
    pub layers: Vec<Vec<Vec<u8>>>,
}

impl InfoVecB {
    pub fn new(base: InfoVecA, layers: Vec<Vec<Vec<u8>>>) -> Result<Self> {
        let v = InfoVecB { base, layers };
        v.validate()?;
        Ok(v)
    }

    pub fn q(&self) -> usize {
        self.base.q()
    }

    pub fn ell(&self) -> usize {
        2 + self.layers.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let q = self.q();
        for (k, layer) in self.layers.iter().enumerate() {
            let i = k + 3;
            let expect = layer_domain_size(q, i);
            if layer.len() != expect {
                return Err(Error::MalformedInfo(format!(
                    "layer {i}: {} maps, expected {expect}",
                    layer.len()
                )));
            }
            for p in layer {
                let mut seen = vec![false; q];
                if p.len() != q || p.iter().any(|&x| (x as usize) >= q || std::mem::replace(&mut seen[x as usize], true)) {
                    return Err(Error::MalformedInfo(format!("layer {i}: not a permutation of Z_{q}")));
                }
            }
        }
        Ok(())
    }

    pub fn random<R: Rng + ?Sized>(q: usize, ell: usize, rng: &mut R) -> Self {
        let base = InfoVecA::random(q, rng);
        let layers = (3..=ell)
            .map(|i| {
                (0..layer_domain_size(q, i))
                    .map(|_| {
                        let mut p: Vec<u8> = (0..q as u8).collect();
                        p.shuffle(rng);
                        p
                    })
                    .collect()
            })
            .collect();
        InfoVecB { base, layers }
    }

    /// The message one stage down, dropping the last layer.
    pub fn parent(&self) -> Option<InfoVecB> {
        let mut layers = self.layers.clone();
        layers.pop()?;
        Some(InfoVecB { base: self.base.clone(), layers })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q={} ell={}\n", self.q(), self.ell());
        self.base.write_body(&mut out);
        for (k, layer) in self.layers.iter().enumerate() {
            for (w, p) in layer_domain(self.q(), k + 3).iter().zip(layer) {
                writeln!(out, "P({w})={}", format_symbols(p)).expect("string write");
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let (q, ell, lines) = header(text)?;
        let (base, rest) = parse_a_body(q, &lines)?;
        let mut rest = rest.iter();
        let mut layers = Vec::new();
        for i in 3..=ell {
            let mut layer = Vec::new();
            for w in layer_domain(q, i) {
                let line = rest
                    .next()
                    .ok_or_else(|| Error::parse(format!("missing P({w}) line")))?;
                let body = line
                    .strip_prefix(&format!("P({w})="))
                    .ok_or_else(|| Error::parse(format!("expected P({w})=..., got {line:?}")))?;
                layer.push(parse_symbols(body, q)?);
            }
            layers.push(layer);
        }
        if let Some(line) = rest.next() {
            return Err(Error::parse(format!("unexpected line {line:?}")));
        }
        InfoVecB::new(base, layers)
    }

    fn radices(q: usize, ell: usize) -> Vec<BigUint> {
        let mut r = InfoVecA::radices(q);
        for i in 3..=ell {
            r.extend(std::iter::repeat_n(factorial(q as u64), layer_domain_size(q, i)));
        }
        r
    }

    /// Size of the message space `J_q^ell`.
    pub fn space_size(q: usize, ell: usize) -> BigUint {
        Self::radices(q, ell).iter().product()
    }

    pub fn to_index(&self) -> BigUint {
        let mut digits = self.base.digits();
        for layer in &self.layers {
            for p in layer {
                let order: Vec<usize> = p.iter().map(|&x| x as usize).collect();
                digits.push(BigUint::from(lex_rank(&order)));
            }
        }
        mixed_radix_encode(&digits, &Self::radices(self.q(), self.ell()))
    }

    pub fn from_index(q: usize, ell: usize, index: &BigUint) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParams("ell must be at least 2".into()));
        }
        let radices = Self::radices(q, ell);
        let digits = mixed_radix_decode(index, &radices)?;
        let a_len = InfoVecA::radices(q).len();
        let a_index = mixed_radix_encode(&digits[..a_len], &radices[..a_len]);
        let base = InfoVecA::from_index(q, &a_index)?;
        let mut it = digits[a_len..].iter();
        let layers = (3..=ell)
            .map(|i| {
                (0..layer_domain_size(q, i))
                    .map(|_| {
                        let r = it.next().expect("digit per map").to_usize().expect("below q!");
                        unrank_permutation(q, r).iter().map(|&x| x as u8).collect()
                    })
                    .collect()
            })
            .collect();
        InfoVecB::new(base, layers)
    }
}

fn header(text: &str) -> Result<(usize, usize, Vec<&str>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines.next().ok_or_else(|| Error::parse("empty information vector"))?;
    let params = crate::profile::parse_params_header(head)?;
    Ok((params.q, params.ell, lines.collect()))
}

fn parse_a_body<'a>(q: usize, lines: &'a [&'a str]) -> Result<(InfoVecA, &'a [&'a str])> {
    let first = lines.first().ok_or_else(|| Error::parse("missing base line"))?;
    let base = first
        .strip_prefix("base=")
        .ok_or_else(|| Error::parse(format!("expected base=..., got {first:?}")))?
        .parse::<usize>()
        .map_err(Error::parse)?;
    let mut stages = Vec::new();
    for j in 4..=q {
        let line = lines.get(j - 3).ok_or_else(|| Error::parse(format!("missing stage {j}")))?;
        let (pi_part, t_part) = line
            .split_once(' ')
            .ok_or_else(|| Error::parse(format!("expected 'pi=... t=...', got {line:?}")))?;
        let pi = pi_part
            .strip_prefix("pi=")
            .ok_or_else(|| Error::parse("missing pi="))?
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(Error::parse))
            .collect::<Result<Vec<_>>>()?;
        let t = t_part
            .trim()
            .strip_prefix("t=")
            .ok_or_else(|| Error::parse("missing t="))?
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        stages.push(StageA { pi, t });
    }
    let consumed = 1 + q.saturating_sub(3);
    Ok((InfoVecA::new(base, stages)?, &lines[consumed.min(lines.len())..]))
}

fn mixed_radix_encode(digits: &[BigUint], radices: &[BigUint]) -> BigUint {
    digits.iter().zip(radices).fold(BigUint::zero(), |acc, (d, r)| acc * r + d)
}

fn mixed_radix_decode(index: &BigUint, radices: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut rest = index.clone();
    let mut digits = vec![BigUint::zero(); radices.len()];
    for (d, r) in digits.iter_mut().zip(radices).rev() {
        let (quot, rem) = rest.div_rem(r);
        *d = rem;
        rest = quot;
    }
    if !rest.is_zero() {
        return Err(Error::MalformedInfo("index exceeds the message space".into()));
    }
    Ok(digits)
}

fn unrank_permutation(n: usize, mut rank: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<usize> = vec![1; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let k = rank / fact[i];
        rank %= fact[i];
        out.push(pool.remove(k));
    }
    out
}

/// Lexicographic rank of a bit pattern among those of its length and weight.
fn combination_rank(t: &[bool]) -> BigUint {
    let mut rank = BigUint::zero();
    let mut ones_left = t.iter().filter(|&&b| b).count() as u64;
    for (i, &b) in t.iter().enumerate() {
        let rest = (t.len() - i - 1) as u64;
        if b {
            // Patterns with a zero here come first.
            rank += binomial(rest, ones_left);
            ones_left -= 1;
        }
    }
    rank
}

fn combination_unrank(n: usize, k: usize, rank: &BigUint) -> Vec<bool> {
    let mut rank = rank.clone();
    let mut ones_left = k as u64;
    (0..n)
        .map(|i| {
            let rest = (n - i - 1) as u64;
            let zeros_first = binomial(rest, ones_left);
            if ones_left > 0 && rank >= zeros_first {
                rank -= zeros_first;
                ones_left -= 1;
                true
            } else {
                false
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn domain_sizes() {
        let a3: Vec<String> = layer_domain(3, 3).iter().map(|w| w.to_string()).collect();
        assert_eq!(a3, ["11", "12", "21", "22"]);
        for q in 3..=5 {
            for i in 3..=5 {
                assert_eq!(layer_domain(q, i).len(), layer_domain_size(q, i));
            }
        }
    }

    #[test]
    fn example_stage_text() {
        let v = InfoVecA::new(7, vec![StageA { pi: vec![2, 3, 4, 1], t: bits("0011100100000") }]).unwrap();
        let text = v.to_text();
        assert_eq!(text, "q=4 ell=2\nbase=7\npi=2,3,4,1 t=0011100100000\n");
        assert_eq!(InfoVecA::parse_text(&text).unwrap(), v);
    }

    #[test]
    fn malformed_vectors_rejected() {
        assert!(InfoVecA::new(0, vec![]).is_err());
        assert!(InfoVecA::new(30241, vec![]).is_err());
        assert!(InfoVecA::new(1, vec![StageA { pi: vec![1, 1, 2, 3], t: bits("0011100100000") }]).is_err());
        assert!(InfoVecA::new(1, vec![StageA { pi: vec![1, 2, 3, 4], t: bits("0011100100001") }]).is_err());
        let b = InfoVecB { base: InfoVecA::new(1, vec![]).unwrap(), layers: vec![vec![vec![0, 1, 2]; 3]] };
        assert!(b.validate().is_err());
    }

    #[test]
    fn combination_ranks_round_trip() {
        let mut seen = std::collections::HashSet::new();
        let total = binomial(7, 3).to_usize().unwrap();
        for r in 0..total {
            let t = combination_unrank(7, 3, &BigUint::from(r));
            assert_eq!(t.iter().filter(|&&b| b).count(), 3);
            assert_eq!(combination_rank(&t), BigUint::from(r));
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn index_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = InfoVecA::random(5, &mut rng);
            let idx = a.to_index();
            assert!(idx < InfoVecA::space_size(5));
            assert_eq!(InfoVecA::from_index(5, &idx).unwrap(), a);

            let b = InfoVecB::random(3, 4, &mut rng);
            let idx = b.to_index();
            assert!(idx < InfoVecB::space_size(3, 4));
            assert_eq!(InfoVecB::from_index(3, 4, &idx).unwrap(), b);
            assert_eq!(InfoVecB::parse_text(&b.to_text()).unwrap(), b);
        }
        assert!(InfoVecA::from_index(3, &BigUint::from(F32)).is_err());
    }
}
