//! The `ell = 2` encoder: a repository matrix grown one symbol at a time.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::{rank_of, RankPermutation};
use crate::profile::ProfileVector;
use crate::word::Params;

use super::info::{InfoVecA, StageA};
use super::repository::Repository;
use super::validate_output;

/// Merges two lists: ones of `t` take from `ones`, zeros from `zeros`, each in order.
pub fn interleave<T: Clone>(t: &[bool], ones: &[T], zeros: &[T]) -> Result<Vec<T>> {
    let weight = t.iter().filter(|&&b| b).count();
    if weight != ones.len() || t.len() - weight != zeros.len() {
        return Err(Error::LengthMismatch { expected: t.len(), got: ones.len() + zeros.len() });
    }
    let (mut a, mut b) = (ones.iter(), zeros.iter());
    Ok(t.iter()
        .map(|&bit| if bit { a.next() } else { b.next() }.expect("counts checked").clone())
        .collect())
}

/// The new entries of one stage.
///
/// Each run of ones in `t` becomes the smallest consecutive integers after the
/// preceding x-value (starting at 1 for a leading run); `y_i` then gets rank
/// `pi[i]` among them.
pub fn choose_y(pi: &[usize], t: &[bool], sorted_x: &[BigUint]) -> Result<Vec<BigUint>> {
    let weight = t.iter().filter(|&&b| b).count();
    if weight != pi.len() || t.len() - weight != sorted_x.len() {
        return Err(Error::LengthMismatch { expected: t.len(), got: pi.len() + sorted_x.len() });
    }
    let mut sorted_y = Vec::with_capacity(weight);
    let mut xs = sorted_x.iter().peekable();
    let mut next = BigUint::one();
    for &bit in t {
        if bit {
            if xs.peek().is_some_and(|&x| next >= *x) {
                return Err(Error::Internal("gap between x-values too small".into()));
            }
            sorted_y.push(next.clone());
            next += 1u32;
        } else {
            next = xs.next().expect("counts checked") + 1u32;
        }
    }
    pi.iter()
        .map(|&r| {
            sorted_y
                .get(r.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::NotAPermutation(format!("rank {r}")))
        })
        .collect()
}

/// One recursive step: from the `(q-1) x (q-1)` matrix to the `q x q` one.
pub fn algorithm_a_step(prev: &[BigUint], stage: &StageA) -> Result<Vec<BigUint>> {
    let q = stage.alphabet();
    let m = q - 1;
    if prev.len() != m * m {
        return Err(Error::LengthMismatch { expected: m * m, got: prev.len() });
    }
    let x: Vec<BigUint> = prev.iter().map(|c| c * (q as u32 + 1)).collect();
    let mut sorted_x = x.clone();
    sorted_x.sort_unstable();
    let y = choose_y(&stage.pi, &stage.t, &sorted_x)?;
    let qb = q as u32;
    let mut out = vec![BigUint::default(); q * q];
    for i in 0..m {
        for j in 0..m {
            let mut v = &x[i * m + j] * qb;
            if j == 0 && i >= 1 {
                v += 1u32;
            }
            out[i * q + j] = v;
        }
    }
    out[m] = &y[0] * qb;
    for i in 1..m {
        out[i * q + m] = &y[i] * qb - 1u32;
        out[m * q + i] = &y[i] * qb;
    }
    out[m * q] = &y[0] * qb - (qb - 2);
    out[m * q + m] = &y[m] * qb;
    Ok(out)
}

/// Runs the stages on top of a given `3 x 3` matrix.
pub fn encode_a_from(base: &[BigUint], stages: &[StageA]) -> Result<ProfileVector> {
    let mut chi = base.to_vec();
    for stage in stages {
        chi = algorithm_a_step(&chi, stage)?;
    }
    let params = Params::new(3 + stages.len(), 2)?;
    validate_output(params, &chi)?;
    ProfileVector::new(params, chi)
}

pub fn encode_a(v: &InfoVecA, repo: &Repository) -> Result<ProfileVector> {
    v.validate()?;
    let base: Vec<BigUint> = repo.get(v.base)?.iter().map(|&x| BigUint::from(x)).collect();
    encode_a_from(&base, &v.stages)
}

/// Recovers the information vector from the permutation of an output.
pub fn decode_a(pi: &RankPermutation, repo: &Repository) -> Result<InfoVecA> {
    let v = decode_a_unchecked(pi, repo)?;
    let again = encode_a(&v, repo)?;
    if rank_of(pi.params(), again.counts())? != *pi {
        return Err(Error::NotACodeword("re-encoding gives a different permutation".into()));
    }
    Ok(v)
}

/// [`decode_a`] applied to the permutation of `chi`.
pub fn decode_a_vector(chi: &ProfileVector, repo: &Repository) -> Result<InfoVecA> {
    decode_a(&rank_of(chi.params(), chi.counts())?, repo)
}

fn decode_a_unchecked(pi: &RankPermutation, repo: &Repository) -> Result<InfoVecA> {
    let Params { q, ell } = pi.params();
    if ell != 2 || q < 3 {
        return Err(Error::InvalidParams(format!("decoder A needs ell = 2 and q >= 3, got {}", pi.params())));
    }
    if q == 3 {
        let base = repo
            .index_of(pi)
            .ok_or_else(|| Error::NotACodeword("permutation is not in the repository".into()))?;
        return InfoVecA::new(base, vec![]);
    }
    let m = q - 1;
    // Words carrying y_0, ..., y_{q-1}.
    let mut reps = vec![m];
    reps.extend((1..m).map(|i| m * q + i));
    reps.push(m * q + m);

    let mut t = Vec::with_capacity(q * q - q + 1);
    let mut old_order = Vec::with_capacity(m * m);
    let mut y_order = Vec::with_capacity(q);
    for w in pi.order() {
        let (i, j) = (w / q, w % q);
        if i < m && j < m {
            t.push(false);
            old_order.push(i * m + j);
        } else if let Some(k) = reps.iter().position(|&r| r == w) {
            t.push(true);
            y_order.push(k);
        }
    }
    let mut stage_pi = vec![0; q];
    for (pos, &k) in y_order.iter().enumerate() {
        stage_pi[k] = pos + 1;
    }
    let prev = RankPermutation::from_order(Params::new(m, 2)?, &old_order)?;
    let mut v = decode_a_unchecked(&prev, repo)?;
    v.stages.push(StageA { pi: stage_pi, t });
    Ok(v)
}
