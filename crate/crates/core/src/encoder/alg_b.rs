//! The general encoder: each stage lifts the previous vector along the
//! symbol-sum homomorphism and breaks ties inside every preimage class.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::perm::{rank_of, RankPermutation};
use crate::profile::ProfileVector;
use crate::word::{homo_d_index, homo_d_preimage_index, Params};

use super::alg_a::{decode_a, encode_a};
use super::info::{layer_domain, InfoVecB};
use super::repository::Repository;
use super::validate_output;

/// Integer output of the general encoder. From the second stage on, each
/// stage multiplies its fractional vector by `q^(q^2)` to clear denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledVector {
    params: Params,
    entries: Vec<BigUint>,
}

impl ScaledVector {
    pub fn params(&self) -> Params {
        self.params
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// Factor applied by the last stage: `q^(q^2)`, or 1 when `ell = 2`.
    pub fn scale(&self) -> BigUint {
        let Params { q, ell } = self.params;
        if ell == 2 {
            BigUint::from(1u32)
        } else {
            Pow::pow(BigUint::from(q), q * q)
        }
    }

    pub fn permutation(&self) -> Result<RankPermutation> {
        rank_of(self.params, &self.entries)
    }

    pub fn into_profile(self) -> ProfileVector {
        ProfileVector::new(self.params, self.entries).expect("length matches params")
    }
}

/// Digit position `[[i, j]] = i + j q + 1` of the fractional `q`-ary expansion.
fn digit(q: usize, i: usize, j: usize) -> usize {
    i + j * q + 1
}

/// Slot of each `(ell-1)`-word in the layer domain, if it has one.
fn layer_slots(q: usize, ell: usize) -> Vec<Option<usize>> {
    let mut slots = vec![None; q.pow(ell as u32 - 1)];
    for (k, w) in layer_domain(q, ell).iter().enumerate() {
        slots[w.index()] = Some(k);
    }
    slots
}

/// One stage of the encoder: `prev` over `Z_q^(ell-1)` to the output over `Z_q^ell`.
pub fn algorithm_b_step(q: usize, ell: usize, prev: &[BigUint], layer: &[Vec<u8>]) -> Result<Vec<BigUint>> {
    let nodes = q.pow(ell as u32 - 1);
    if prev.len() != nodes {
        return Err(Error::LengthMismatch { expected: nodes, got: prev.len() });
    }
    let slots = layer_slots(q, ell);
    if layer.len() != slots.iter().flatten().count() {
        return Err(Error::MalformedInfo("layer size does not match its domain".into()));
    }
    // weight[k] = q^(q^2 - k): the scaled value of one unit in fractional digit k.
    let weight: Vec<BigInt> = (0..=q * q).map(|k| Pow::pow(BigInt::from(q), q * q - k)).collect();
    let scale = &weight[0];
    let last_place = q.pow(ell as u32 - 2);
    // P evaluated at w with its first and last symbols replaced.
    let p_at = |w: usize, first: usize, last: usize, arg: usize| -> BigInt {
        let middle = w % last_place - w % q;
        let slot = slots[first * last_place + middle + last].expect("both ends nonzero");
        BigInt::from(layer[slot][arg % q])
    };

    let words = nodes * q;
    let mut out = Vec::with_capacity(words);
    for v in 0..words {
        let v0 = v / nodes;
        let w = homo_d_index(q, ell, v);
        let (w0, wl) = (w / last_place, w % q);
        let mut adj = BigInt::zero();
        match (w0 != 0, wl != 0) {
            (true, true) => adj += p_at(w, w0, wl, v0) * &weight[digit(q, w0, wl)],
            (false, true) => {
                for mu in 1..q {
                    adj -= p_at(w, mu, wl, mu + v0) * &weight[digit(q, mu, wl)];
                }
            }
            (true, false) => {
                for tau in 1..q {
                    adj -= p_at(w, w0, tau, v0) * &weight[digit(q, w0, tau)];
                }
            }
            (false, false) => {
                for mu in 1..q {
                    for tau in 1..q {
                        adj += p_at(w, mu, tau, mu + v0) * &weight[digit(q, mu, tau)];
                    }
                }
            }
        }
        let entry = BigInt::from_biguint(Sign::Plus, &prev[w] * 2u32) * scale + adj;
        out.push(entry.to_biguint().ok_or_else(|| Error::Internal("negative entry".into()))?);
    }
    Ok(out)
}

pub fn encode_b(v: &InfoVecB, repo: &Repository) -> Result<ScaledVector> {
    v.validate()?;
    let q = v.q();
    let mut chi = encode_a(&v.base, repo)?.into_counts();
    for (k, layer) in v.layers.iter().enumerate() {
        chi = algorithm_b_step(q, k + 3, &chi, layer)?;
    }
    let params = Params::new(q, v.ell())?;
    validate_output(params, &chi)?;
    Ok(ScaledVector { params, entries: chi })
}

/// Recovers the information vector from the permutation of an output.
pub fn decode_b(pi: &RankPermutation, repo: &Repository) -> Result<InfoVecB> {
    let v = decode_b_unchecked(pi, repo)?;
    if encode_b(&v, repo)?.permutation()? != *pi {
        return Err(Error::NotACodeword("re-encoding gives a different permutation".into()));
    }
    Ok(v)
}

/// [`decode_b`] applied to the permutation of `chi`.
pub fn decode_b_vector(chi: &ScaledVector, repo: &Repository) -> Result<InfoVecB> {
    decode_b(&chi.permutation()?, repo)
}

fn decode_b_unchecked(pi: &RankPermutation, repo: &Repository) -> Result<InfoVecB> {
    let Params { q, ell } = pi.params();
    if ell == 2 {
        return InfoVecB::new(decode_a(pi, repo)?, vec![]);
    }
    let nodes = q.pow(ell as u32 - 1);
    let class_rank = |w: usize| -> Vec<usize> {
        (0..q).map(|i| pi.rank(homo_d_preimage_index(q, ell - 1, w, i))).collect()
    };
    let layer = layer_domain(q, ell)
        .iter()
        .map(|w| {
            let ranks = class_rank(w.index());
            ranks
                .iter()
                .map(|r| ranks.iter().filter(|&s| s < r).count() as u8)
                .collect()
        })
        .collect();
    let mut classes: Vec<(usize, usize)> =
        (0..nodes).map(|w| (*class_rank(w).iter().min().expect("q >= 2"), w)).collect();
    classes.sort_unstable();
    let order: Vec<usize> = classes.into_iter().map(|(_, w)| w).collect();
    let prev = RankPermutation::from_order(Params::new(q, ell - 1)?, &order)?;
    let mut v = decode_b_unchecked(&prev, repo)?;
    v.layers.push(layer);
    Ok(v)
}
