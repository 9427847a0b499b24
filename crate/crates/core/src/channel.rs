//! A toy DNA storage channel: perturb a profile vector, then read back its
//! rank order.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::RankPermutation;
use crate::profile::ProfileVector;
use crate::word::Word;

/// How counts are disturbed.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Each entry moves by a uniform integer in `[-m, m]`.
    Additive { m: u64 },
    /// Each counted window is lost independently with probability `rate`.
    Drop { rate: f64 },
    /// A fixed per-entry change.
    Explicit(Vec<i64>),
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseModel::Additive { m } => write!(f, "additive:{m}"),
            NoiseModel::Drop { rate } => write!(f, "drop:{rate}"),
            NoiseModel::Explicit(d) => write!(f, "explicit:{d:?}"),
        }
    }
}

impl NoiseModel {
    fn validate(&self, len: usize) -> Result<()> {
        match self {
            NoiseModel::Drop { rate } if !(0.0..=1.0).contains(rate) => {
                Err(Error::InvalidParams(format!("drop rate {rate} outside [0, 1]")))
            }
            NoiseModel::Explicit(d) if d.len() != len => Err(Error::LengthMismatch { expected: len, got: d.len() }),
            _ => Ok(()),
        }
    }
}

fn apply<R: Rng + ?Sized>(p: &ProfileVector, model: &NoiseModel, rng: &mut R) -> Result<ProfileVector> {
    let counts = p
        .counts()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let moved = match model {
                NoiseModel::Additive { m } => {
                    let m = *m as i64;
                    BigInt::from(c.clone()) + rng.random_range(-m..=m)
                }
                NoiseModel::Drop { rate } => {
                    let n = c.to_u64().ok_or_else(|| Error::CapExceeded("count exceeds 64 bits".into()))?;
                    let kept = Binomial::new(n, 1.0 - rate)
                        .map_err(|e| Error::InvalidParams(e.to_string()))?
                        .sample(rng);
                    BigInt::from(kept)
                }
                NoiseModel::Explicit(d) => BigInt::from(c.clone()) + d[i],
            };
            Ok(if moved.is_negative() { BigUint::zero() } else { moved.to_biguint().expect("nonnegative") })
        })
        .collect::<Result<Vec<_>>>()?;
    ProfileVector::new(p.params(), counts)
}

/// Perturbed counts, clamped at zero; deterministic per seed.
pub fn perturb(p: &ProfileVector, model: &NoiseModel, seed: u64) -> Result<ProfileVector> {
    model.validate(p.counts().len())?;
    apply(p, model, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// What the receiver reads from a profile vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOutcome {
    Permutation(RankPermutation),
    /// Pairs of words whose counts collide.
    Tie(Vec<(Word, Word)>),
}

pub fn rank_decode(p: &ProfileVector) -> RankOutcome {
    let params = p.params();
    let c = p.counts();
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c[a].cmp(&c[b]));
    let ties: Vec<(Word, Word)> = order
        .windows(2)
        .filter(|w| c[w[0]] == c[w[1]])
        .map(|w| (params.word(w[0]), params.word(w[1])))
        .collect();
    if ties.is_empty() {
        RankOutcome::Permutation(RankPermutation::from_order(params, &order).expect("a permutation"))
    } else {
        RankOutcome::Tie(ties)
    }
}

/// Smallest difference between two entries.
pub fn min_gap(p: &ProfileVector) -> BigUint {
    let mut c = p.counts().to_vec();
    c.sort_unstable();
    c.windows(2).map(|w| &w[1] - &w[0]).min().unwrap_or_default()
}

/// Monte-Carlo tally for one noise setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRow {
    pub model: String,
    pub trials: u64,
    pub successes: u64,
    pub ties: u64,
    pub rank_errors: u64,
}

/// Sends `p` through each model `trials` times. Trial `k` uses stream `k`
/// of a generator keyed by `seed`, so results do not depend on `jobs`.
pub fn simulate(p: &ProfileVector, models: &[NoiseModel], trials: u64, seed: u64, jobs: usize) -> Result<Vec<SimRow>> {
    let clean = match rank_decode(p) {
        RankOutcome::Permutation(pi) => pi,
        RankOutcome::Tie(_) => return Err(Error::InvalidParams("clean vector has ties".into())),
    };
    for m in models {
        m.validate(p.counts().len())?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| {
        models
            .iter()
            .enumerate()
            .map(|(mi, model)| {
                let outcomes = (0..trials)
                    .into_par_iter()
                    .map(|k| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (mi as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                        rng.set_stream(k);
                        Ok(match rank_decode(&apply(p, model, &mut rng)?) {
                            RankOutcome::Permutation(pi) if pi == clean => (1, 0, 0),
                            RankOutcome::Permutation(_) => (0, 0, 1),
                            RankOutcome::Tie(_) => (0, 1, 0),
                        })
                    })
                    .collect::<Result<Vec<(u64, u64, u64)>>>()?;
                let (successes, ties, rank_errors) =
                    outcomes.iter().fold((0, 0, 0), |a, o| (a.0 + o.0, a.1 + o.1, a.2 + o.2));
                Ok(SimRow { model: model.to_string(), trials, successes, ties, rank_errors })
            })
            .collect()
    })
}

/// Tab-separated table with a header line.
pub fn report(rows: &[SimRow]) -> String {
    let mut out = String::from("noise\ttrials\tsuccesses\tties\trank_errors\n");
    for r in rows {
        writeln!(out, "{}\t{}\t{}\t{}\t{}", r.model, r.trials, r.successes, r.ties, r.rank_errors).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Params;

    fn storage() -> ProfileVector {
        ProfileVector::from_u64(Params::new(3, 2).unwrap(), &[2, 4, 10, 6, 12, 14, 8, 16, 18]).unwrap()
    }

    #[test]
    fn figure_output_vector() {
        let out = perturb(&storage(), &NoiseModel::Explicit(vec![0, 0, 0, 0, 1, 0, 0, 0, -1]), 0).unwrap();
        assert_eq!(out.to_u64().unwrap(), vec![2, 4, 10, 6, 13, 14, 8, 16, 17]);
        let pi = RankPermutation::parse_text(out.params(), "00,01,10,20,02,11,12,21,22").unwrap();
        assert_eq!(rank_decode(&out), RankOutcome::Permutation(pi));
    }

    #[test]
    fn zero_noise_is_identity() {
        assert_eq!(perturb(&storage(), &NoiseModel::Additive { m: 0 }, 7).unwrap(), storage());
        assert_eq!(perturb(&storage(), &NoiseModel::Drop { rate: 0.0 }, 7).unwrap(), storage());
    }

    #[test]
    fn ties_are_reported() {
        let p = ProfileVector::from_u64(Params::new(2, 1).unwrap(), &[3, 3]).unwrap();
        assert!(matches!(rank_decode(&p), RankOutcome::Tie(t) if t.len() == 1));
    }

    #[test]
    fn small_noise_preserves_order() {
        // Gap 6: moves of at most 2 cannot swap two entries.
        let doubled: Vec<u64> = [2, 4, 10, 6, 12, 14, 8, 16, 18].iter().map(|x| x * 3).collect();
        let p = ProfileVector::from_u64(Params::new(3, 2).unwrap(), &doubled).unwrap();
        assert_eq!(min_gap(&p), BigUint::from(6u32));
        let rows = simulate(&p, &[NoiseModel::Additive { m: 2 }], 200, 1, 1).unwrap();
        assert_eq!(rows[0].successes, 200);
    }

    #[test]
    fn success_falls_with_noise() {
        let rows = simulate(
            &storage(),
            &[NoiseModel::Additive { m: 1 }, NoiseModel::Additive { m: 4 }, NoiseModel::Additive { m: 16 }],
            400,
            5,
            2,
        )
        .unwrap();
        assert!(rows[0].successes > rows[1].successes && rows[1].successes > rows[2].successes);
        let models = [NoiseModel::Additive { m: 1 }, NoiseModel::Additive { m: 4 }, NoiseModel::Additive { m: 16 }];
        assert_eq!(rows, simulate(&storage(), &models, 400, 5, 1).unwrap());
        assert!(report(&rows).starts_with("noise\ttrials"));
    }

    #[test]
    fn bad_models_rejected() {
        assert!(perturb(&storage(), &NoiseModel::Drop { rate: 1.5 }, 0).is_err());
        assert!(perturb(&storage(), &NoiseModel::Explicit(vec![1]), 0).is_err());
    }
}
