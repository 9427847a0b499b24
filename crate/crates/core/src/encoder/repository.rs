//! The table of integer feasible 3x3 matrices seeding both encoders.

use std::fmt::Write as _;

use once_cell::sync::Lazy;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::feasibility::FeasibleVector;
use crate::oracle::lex_rank;
use crate::perm::{rank_of, RankPermutation};
use crate::word::Params;

use super::info::F32;

const HEADER: &str = "f32=30240";
const EMBEDDED_TEXT: &str = include_str!("../../data/repository.txt");

static EMBEDDED: Lazy<Repository> =
    Lazy::new(|| Repository::parse_text(EMBEDDED_TEXT).expect("embedded repository is valid"));

/// One positive integer feasible vector per feasible `(3, 2)` permutation,
/// sorted by the lexicographic rank of the permutation's word sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repository {
    entries: Vec<[u64; 9]>,
    /// `lex_rank` of each entry's permutation; strictly increasing.
    keys: Vec<usize>,
}

fn p32() -> Params {
    Params::new(3, 2).expect("valid")
}

impl Repository {
    /// Validates each entry and sorts by permutation.
    pub fn new(entries: Vec<[u64; 9]>) -> Result<Self> {
        if entries.len() != F32 {
            return Err(Error::Repository(format!("{} entries, expected {F32}", entries.len())));
        }
        let mut keyed = entries
            .into_iter()
            .map(|e| {
                FeasibleVector::from_integers(p32(), e.map(|x| x as i64)).map_err(|err| {
                    Error::Repository(format!("entry {e:?} is not feasible: {err}"))
                })?;
                if e.contains(&0) {
                    return Err(Error::Repository(format!("entry {e:?} has a zero")));
                }
                Ok((lex_rank(&rank_of(p32(), &e)?.order()), e))
            })
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_unstable_by_key(|&(k, _)| k);
        if keyed.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::Repository("two entries share a permutation".into()));
        }
        let (keys, entries) = keyed.into_iter().unzip();
        Ok(Repository { entries, keys })
    }

    /// The copy shipped with the library.
    pub fn embedded() -> &'static Repository {
        &EMBEDDED
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[[u64; 9]] {
        &self.entries
    }

    /// Entry with 1-based `index`.
    pub fn get(&self, index: usize) -> Result<&[u64; 9]> {
        index
            .checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .ok_or_else(|| Error::Repository(format!("index {index} outside 1..={}", self.len())))
    }

    pub fn permutation(&self, index: usize) -> Result<RankPermutation> {
        rank_of(p32(), self.get(index)?)
    }

    /// 1-based index of the entry satisfying `pi`, if `pi` is feasible.
    pub fn index_of(&self, pi: &RankPermutation) -> Option<usize> {
        if pi.params() != p32() {
            return None;
        }
        self.keys.binary_search(&lex_rank(&pi.order())).ok().map(|i| i + 1)
    }

    pub fn max_entry(&self) -> u64 {
        self.entries.iter().flatten().copied().max().unwrap_or(0)
    }

    fn body(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 28);
        for e in &self.entries {
            let line: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).expect("string write");
        }
        out
    }

    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn to_text(&self) -> String {
        format!("{HEADER}\n{}sha256={}\n", self.body(), self.checksum())
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(Error::Repository(format!("missing header {HEADER:?}")));
        }
        let mut entries = Vec::with_capacity(F32);
        let mut checksum = None;
        for (n, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(sum) = line.strip_prefix("sha256=") {
                checksum = Some(sum.to_string());
                continue;
            }
            if checksum.is_some() {
                return Err(Error::Repository("data after the checksum line".into()));
            }
            let vals = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Repository(format!("line {}: {e}", n + 2)))?;
            let e: [u64; 9] = vals
                .try_into()
                .map_err(|_| Error::Repository(format!("line {}: expected 9 integers", n + 2)))?;
            entries.push(e);
        }
        let checksum = checksum.ok_or_else(|| Error::Repository("missing checksum line".into()))?;
        let repo = Repository::new(entries)?;
        if repo.checksum() != checksum {
            return Err(Error::Repository("checksum mismatch".into()));
        }
        Ok(repo)
    }
}
