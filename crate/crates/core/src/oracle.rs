//! Exhaustive ground truth for small parameters.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::encoder::{Repository, F32};
use crate::error::{Error, Result};
use crate::feasibility::{decide, decide_lp, matching_precheck, ballot_color, Color};
use crate::math::factorial;
use crate::perm::{next_permutation, RankPermutation};
use crate::profile::ProfileVector;
use crate::synthesis::check_connectivity;
use crate::word::Params;

/// Largest `q^ell` whose permutations are enumerated.
pub const CENSUS_MAX_WORDS: usize = 9;

/// Entry cap used to build the shipped repository.
pub const REPOSITORY_CAP: u32 = 17;

fn check_census_params(params: Params) -> Result<()> {
    if params.num_words() > CENSUS_MAX_WORDS {
        return Err(Error::CapExceeded(format!(
            "q^ell = {} exceeds the enumeration cap {CENSUS_MAX_WORDS}",
            params.num_words()
        )));
    }
    Ok(())
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs `visit` on every permutation of `0..n` whose order starts with
/// `prefix`, in lexicographic order.
fn for_each_with_prefix(n: usize, prefix: &[usize], mut visit: impl FnMut(&[usize])) {
    let mut order: Vec<usize> = prefix.to_vec();
    order.extend((0..n).filter(|x| !prefix.contains(x)));
    loop {
        visit(&order);
        if !next_permutation(&mut order[prefix.len()..]) {
            break;
        }
    }
}

/// Work units: all ordered prefixes of length two (or one, for tiny `n`).
fn prefixes(n: usize) -> Vec<Vec<usize>> {
    match n {
        0 | 1 => vec![vec![]],
        2 => (0..n).map(|a| vec![a]).collect(),
        _ => (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect(),
    }
}

/// Lexicographic rank of a permutation of `0..n` among all `n!` of them.
pub fn lex_rank(order: &[usize]) -> usize {
    let n = order.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = order[i + 1..].iter().filter(|&&x| x < order[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

#[derive(Debug, Clone)]
pub struct Census {
    pub params: Params,
    pub total: u64,
    /// Feasible permutations in lexicographic order of their word sequences.
    pub feasible: Vec<RankPermutation>,
    pub elapsed: Duration,
}

impl Census {
    pub fn count(&self) -> usize {
        self.feasible.len()
    }

    pub fn report(&self) -> String {
        format!(
            "q={} ell={}\npermutations={}\nfeasible={}\nwall_seconds={:.3}\n",
            self.params.q,
            self.params.ell,
            self.total,
            self.feasible.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

/// Decides every permutation of `Sigma^ell`; `jobs = 0` uses all cores.
pub fn enumerate_feasible(params: Params, jobs: usize) -> Result<Census> {
    check_census_params(params)?;
    let start = Instant::now();
    let n = params.num_words();
    let chunks: Vec<(u64, Vec<RankPermutation>)> = with_pool(jobs, || {
        prefixes(n)
            .par_iter()
            .map(|prefix| {
                let mut seen = 0u64;
                let mut found = Vec::new();
                for_each_with_prefix(n, prefix, |order| {
                    seen += 1;
                    let pi = RankPermutation::from_order(params, order).expect("valid order");
                    if decide(&pi).is_feasible() {
                        found.push(pi);
                    }
                });
                (seen, found)
            })
            .collect()
    })?;
    let total = chunks.iter().map(|c| c.0).sum();
    let feasible = chunks.into_iter().flat_map(|c| c.1).collect();
    Ok(Census { params, total, feasible, elapsed: start.elapsed() })
}

/// Confusion counts between the matching precheck and the LP alone.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GapStats {
    pub total: u64,
    pub lp_feasible: u64,
    pub precheck_fires: u64,
    /// Precheck fires although the LP finds a witness; must be zero.
    pub soundness_violations: u64,
    /// LP infeasible but the precheck stays silent.
    pub silent_infeasible: u64,
}

impl GapStats {
    fn merge(self, o: GapStats) -> GapStats {
        GapStats {
            total: self.total + o.total,
            lp_feasible: self.lp_feasible + o.lp_feasible,
            precheck_fires: self.precheck_fires + o.precheck_fires,
            soundness_violations: self.soundness_violations + o.soundness_violations,
            silent_infeasible: self.silent_infeasible + o.silent_infeasible,
        }
    }
}

pub fn precheck_completeness_gap(params: Params, jobs: usize) -> Result<GapStats> {
    check_census_params(params)?;
    if params.ell < 2 {
        return Err(Error::NoFlowConstraints);
    }
    let n = params.num_words();
    with_pool(jobs, || {
        prefixes(n)
            .par_iter()
            .map(|prefix| {
                let mut s = GapStats::default();
                for_each_with_prefix(n, prefix, |order| {
                    let pi = RankPermutation::from_order(params, order).expect("valid order");
                    let fires = matching_precheck(&pi).is_some();
                    let feasible = decide_lp(&pi).is_feasible();
                    s.total += 1;
                    s.lp_feasible += feasible as u64;
                    s.precheck_fires += fires as u64;
                    s.soundness_violations += (fires && feasible) as u64;
                    s.silent_infeasible += (!fires && !feasible) as u64;
                });
                s
            })
            .reduce(GapStats::default, GapStats::merge)
    })
}

/// (3,2) words, lexicographic: 00 01 02 10 11 12 20 21 22.
const W00: usize = 0;
const W01: usize = 1;
const W02: usize = 2;
const W10: usize = 3;
const W11: usize = 4;
const W12: usize = 5;
const W20: usize = 6;
const W21: usize = 7;
const W22: usize = 8;

/// For every feasible (3,2) permutation, the vector with entries in `[1, cap]`
/// minimizing the largest entry, ties broken lexicographically on the entries
/// in word order. Indexed by [`lex_rank`] of the permutation's word sequence.
///
/// Seven entries are enumerated; flow conservation at nodes 0 and 1 then
/// fixes `m20 = m01 + m02 - m10` and `m21 = m10 + m12 - m01`, and node 2 follows.
pub fn min_max_vectors_32(cap: u32, jobs: usize) -> Result<Vec<Option<[u32; 9]>>> {
    type Best = Vec<Option<[u32; 9]>>;
    let better = |a: &[u32; 9], b: &[u32; 9]| {
        let (ma, mb) = (a.iter().max(), b.iter().max());
        ma < mb || (ma == mb && a < b)
    };
    let merge = |mut x: Best, y: Best| {
        for (slot, cand) in x.iter_mut().zip(y) {
            if let Some(c) = cand {
                if slot.as_ref().is_none_or(|s| better(&c, s)) {
                    *slot = Some(c);
                }
            }
        }
        x
    };
    let total = factorial(9).try_into().expect("9! fits");
    with_pool(jobs, || {
        (1..=cap)
            .into_par_iter()
            .map(|m00| {
                let mut best: Best = vec![None; total];
                let mut m = [0u32; 9];
                m[W00] = m00;
                let mut used = vec![false; cap as usize + 1];
                used[m00 as usize] = true;
                let mut order: Vec<usize> = (0..9).collect();
                search_32(&mut m, &mut used, 1, cap, &mut |m| {
                    order.sort_unstable_by_key(|&w| m[w]);
                    let r = lex_rank(&order);
                    if best[r].as_ref().is_none_or(|b| better(m, b)) {
                        best[r] = Some(*m);
                    }
                });
                best
            })
            .reduce(|| vec![None; total], merge)
    })
}

const FREE_32: [usize; 7] = [W00, W01, W02, W10, W11, W12, W22];

fn search_32(m: &mut [u32; 9], used: &mut [bool], depth: usize, cap: u32, visit: &mut impl FnMut(&[u32; 9])) {
    if depth == FREE_32.len() {
        let m20 = m[W01] as i64 + m[W02] as i64 - m[W10] as i64;
        let m21 = m[W10] as i64 + m[W12] as i64 - m[W01] as i64;
        let ok = |x: i64| x >= 1 && x <= cap as i64 && !used[x as usize];
        if ok(m20) && ok(m21) && m20 != m21 {
            m[W20] = m20 as u32;
            m[W21] = m21 as u32;
            visit(m);
        }
        return;
    }
    for x in 1..=cap {
        if used[x as usize] {
            continue;
        }
        used[x as usize] = true;
        m[FREE_32[depth]] = x;
        search_32(m, used, depth + 1, cap, visit);
        used[x as usize] = false;
    }
}

/// Positive max-entry-minimal vectors for every feasible (3,2) permutation,
/// with entries capped at `cap`. Fails if some feasible permutation has no
/// vector under the cap.
pub fn build_repository(cap: u32, jobs: usize) -> Result<Repository> {
    let best = min_max_vectors_32(cap, jobs)?;
    let entries: Vec<[u64; 9]> = best.iter().flatten().map(|m| m.map(u64::from)).collect();
    if entries.len() != F32 {
        return Err(Error::SearchExhausted(format!(
            "{} of {F32} feasible permutations have a vector with entries at most {cap}",
            entries.len()
        )));
    }
    Repository::new(entries)
}

/// Smallest cap under which every feasible (3,2) permutation has a positive vector,
/// with the number of permutations left uncovered at `cap - 1`.
pub fn compute_c3(jobs: usize) -> Result<(u64, usize)> {
    let best = min_max_vectors_32(REPOSITORY_CAP, jobs)?;
    let maxes: Vec<u32> = best.iter().flatten().map(|m| *m.iter().max().expect("nonempty")).collect();
    if maxes.len() != F32 {
        return Err(Error::SearchExhausted(format!("cap {REPOSITORY_CAP} covers only {}", maxes.len())));
    }
    let c = *maxes.iter().max().expect("nonempty");
    Ok((c as u64, maxes.iter().filter(|&&m| m == c).count()))
}

/// What [`min_integer_vector`] minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MaxEntry,
    Sum,
}

/// Smallest integer witness for `pi` with entries in `[min_entry, cap]`,
/// searching increasing values along the rank order. Ties go to the
/// lexicographically smallest vector in word order. A zero entry is only
/// accepted when the remaining support is strongly connected, so every
/// result is the profile of some circular string.
pub fn min_integer_vector(pi: &RankPermutation, min_entry: u64, cap: u64, objective: Objective) -> Result<Vec<u64>> {
    let params = pi.params();
    check_census_params(params)?;
    let order = pi.order();
    let mut search = Search { params, order: &order, cap, objective, vals: vec![0; order.len()], best: None };
    search.go(0, min_entry, 0);
    search
        .best
        .map(|(_, v)| v)
        .ok_or_else(|| Error::SearchExhausted(format!("no integer witness with entries in [{min_entry}, {cap}]")))
}

struct Search<'a> {
    params: Params,
    order: &'a [usize],
    cap: u64,
    objective: Objective,
    vals: Vec<u64>,
    best: Option<(u64, Vec<u64>)>,
}

impl Search<'_> {
    fn go(&mut self, k: usize, lo: u64, partial: u64) {
        let n = self.order.len();
        if k == n {
            self.leaf();
            return;
        }
        let remaining = (n - k) as u64;
        for x in lo..=self.cap.saturating_sub(remaining - 1) {
            // Cheapest completion under the increasing constraint.
            let bound = match self.objective {
                Objective::MaxEntry => x + remaining - 1,
                Objective::Sum => partial + remaining * x + remaining * (remaining - 1) / 2,
            };
            if self.best.as_ref().is_some_and(|(s, _)| bound > *s) {
                break;
            }
            self.vals[self.order[k]] = x;
            self.go(k + 1, x + 1, partial + x);
        }
        self.vals[self.order[k]] = 0;
    }

    fn leaf(&mut self) {
        if crate::profile::flow_violation(self.params, &self.vals).is_some() {
            return;
        }
        let score = match self.objective {
            Objective::MaxEntry => *self.vals.iter().max().expect("nonempty"),
            Objective::Sum => self.vals.iter().sum(),
        };
        let better = self
            .best
            .as_ref()
            .is_none_or(|(s, v)| score < *s || (score == *s && self.vals.as_slice() < v.as_slice()));
        if !better {
            return;
        }
        if self.vals.contains(&0) {
            let p = ProfileVector::from_u64(self.params, &self.vals).expect("sized");
            if !check_connectivity(&p).unwrap_or(false) {
                return;
            }
        }
        self.best = Some((score, self.vals.clone()));
    }
}

/// `len(pi)`: the least total of a nonnegative integer witness with strongly
/// connected support, which is the length of the shortest circular string
/// satisfying `pi`.
pub fn min_string_length(pi: &RankPermutation, cap: u64) -> Result<u64> {
    Ok(min_integer_vector(pi, 0, cap, Objective::Sum)?.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingCount {
    pub q: usize,
    pub permutations: u64,
    pub green: u64,
    pub red: u64,
    pub both: u64,
    /// Permutations where the ballot test and the brute-force matching search disagree.
    pub ballot_disagreements: u64,
}

impl MatchingCount {
    pub fn count(&self) -> u64 {
        self.green + self.red - self.both
    }

    pub fn ratio(&self) -> f64 {
        self.count() as f64 / self.permutations as f64
    }
}

/// Orders of `q` in-elements and `q` out-elements admitting a perfect
/// matching whose pairs all point the same way, found by trying every
/// bijection and cross-checked against the ballot test.
pub fn verify_matching_count(q: usize) -> Result<MatchingCount> {
    if !(2..=4).contains(&q) {
        return Err(Error::CapExceeded(format!("(2q)! enumeration supports q in 2..=4, got {q}")));
    }
    let m = 2 * q;
    let mut res = MatchingCount { q, permutations: 0, green: 0, red: 0, both: 0, ballot_disagreements: 0 };
    let mut ranks: Vec<usize> = (0..m).collect();
    let mut bij: Vec<usize> = (0..q).collect();
    loop {
        // Elements 0..q are entering, q..2q leaving; ranks[e] is the position of element e.
        let mut green = false;
        let mut red = false;
        bij.sort_unstable();
        loop {
            green |= (0..q).all(|i| ranks[i] < ranks[q + bij[i]]);
            red |= (0..q).all(|i| ranks[i] > ranks[q + bij[i]]);
            if !next_permutation(&mut bij) {
                break;
            }
        }
        let mut signs = vec![0i32; m];
        for e in 0..m {
            signs[ranks[e]] = if e < q { 1 } else { -1 };
        }
        let ballot = ballot_color(signs);
        let expect = match (green, red) {
            (true, false) => Some(Color::Green),
            (false, true) => Some(Color::Red),
            _ => None,
        };
        if ballot != expect || (green && red) {
            res.ballot_disagreements += 1;
        }
        res.permutations += 1;
        res.green += green as u64;
        res.red += red as u64;
        res.both += (green && red) as u64;
        if !next_permutation(&mut ranks) {
            break;
        }
    }
    Ok(res)
}
