//! Random strings from a flow-conserving distribution.
//!
//! From state `a` (an ell-word with suffix `v`) the chain moves to `v sigma`
//! with probability `s(v sigma) / sum_tau s(v tau)`. Flow conservation of `s`
//! makes `s` stationary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::profile::flow_violation;
use crate::word::{Params, Word};

/// Row-stochastic matrix on `Sigma^ell`, stored per row as its `q` out-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    params: Params,
    /// `rows[a][sigma]` is the probability of moving from `a` to `suffix(a) sigma`.
    rows: Vec<Vec<BigRational>>,
}

impl TransitionMatrix {
    pub fn params(&self) -> Params {
        self.params
    }

    /// Entry `(a, b)`; zero unless `b` follows `a` in the DeBruijn graph.
    pub fn get(&self, a: usize, b: usize) -> BigRational {
        let v = self.params.edge_head(a);
        if self.params.edge_tail(b) == v {
            self.rows[a][b % self.params.q].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn row(&self, a: usize) -> &[BigRational] {
        &self.rows[a]
    }

    /// `s * M`, in exact arithmetic.
    pub fn left_multiply(&self, s: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.params.num_words()];
        for (a, row) in self.rows.iter().enumerate() {
            let v = self.params.edge_head(a);
            for (sigma, m) in row.iter().enumerate() {
                out[self.params.out_edge(v, sigma)] += &s[a] * m;
            }
        }
        out
    }
}

/// Scales a positive vector to sum to one.
pub fn normalize(values: &[BigRational]) -> Result<Vec<BigRational>> {
    let total: BigRational = values.iter().sum();
    if !total.is_positive() {
        return Err(Error::ZeroProfile);
    }
    Ok(values.iter().map(|x| x / &total).collect())
}

fn check_distribution(params: Params, s: &[BigRational]) -> Result<()> {
    if s.len() != params.num_words() {
        return Err(Error::LengthMismatch { expected: params.num_words(), got: s.len() });
    }
    if params.ell < 2 {
        return Err(Error::NoFlowConstraints);
    }
    if let Some(i) = s.iter().position(|x| !x.is_positive()) {
        return Err(Error::InvalidParams(format!("s({}) is not positive", params.word(i))));
    }
    if !s.iter().sum::<BigRational>().is_one() {
        return Err(Error::InvalidParams("s does not sum to 1".into()));
    }
    if let Some(v) = flow_violation(params, s) {
        return Err(Error::NotFlowConserving(Word::from_index(params.q, params.ell - 1, v).to_string()));
    }
    Ok(())
}

pub fn markov_matrix(params: Params, s: &[BigRational]) -> Result<TransitionMatrix> {
    check_distribution(params, s)?;
    let node_out: Vec<BigRational> = (0..params.num_nodes())
        .map(|v| (0..params.q).map(|sigma| &s[params.out_edge(v, sigma)]).sum())
        .collect();
    let rows = (0..params.num_words())
        .map(|a| {
            let v = params.edge_head(a);
            (0..params.q).map(|sigma| &s[params.out_edge(v, sigma)] / &node_out[v]).collect()
        })
        .collect();
    Ok(TransitionMatrix { params, rows })
}

/// A walk of the chain spelled as a linear string of length `n`.
///
/// The first state is drawn from `s` itself, so the walk starts in
/// equilibrium; its symbols open the string and every step appends one more.
pub fn markov_generate(params: Params, s: &[BigRational], n: usize, seed: u64) -> Result<Vec<u8>> {
    let m = markov_matrix(params, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let to_f64 = |x: &BigRational| x.to_f64().unwrap_or(0.0);
    let initial = WeightedIndex::new(s.iter().map(to_f64))
        .map_err(|e| Error::Internal(format!("initial distribution: {e}")))?;
    let steps: Vec<WeightedIndex<f64>> = (0..params.num_nodes())
        .map(|v| {
            let a = params.in_edge(v, 0);
            WeightedIndex::new(m.row(a).iter().map(to_f64))
                .map_err(|e| Error::Internal(format!("transition row: {e}")))
        })
        .collect::<Result<_>>()?;

    let a0 = initial.sample(&mut rng);
    let mut out: Vec<u8> = Word::from_index(params.q, params.ell, a0).symbols().to_vec();
    out.truncate(n);
    let mut state = a0;
    while out.len() < n {
        let v = params.edge_head(state);
        let sigma = steps[v].sample(&mut rng);
        out.push(sigma as u8);
        state = params.out_edge(v, sigma);
    }
    Ok(out)
}

/// Uniform distribution over `Sigma^ell`.
pub fn uniform(params: Params) -> Vec<BigRational> {
    let n = BigInt::from(params.num_words());
    vec![BigRational::new(BigInt::one(), n); params.num_words()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ratio;

    fn base_over_45() -> Vec<BigRational> {
        [1, 2, 5, 3, 6, 7, 4, 8, 9].iter().map(|&x| ratio(x, 45)).collect()
    }

    #[test]
    fn uniform_rows() {
        let params = Params::new(3, 2).unwrap();
        let m = markov_matrix(params, &uniform(params)).unwrap();
        for a in 0..9 {
            assert!(m.row(a).iter().all(|x| *x == ratio(1, 3)));
        }
    }

    #[test]
    fn base_vector_is_stationary() {
        let params = Params::new(3, 2).unwrap();
        let s = base_over_45();
        let m = markov_matrix(params, &s).unwrap();
        assert_eq!(m.left_multiply(&s), s);
        for a in 0..9 {
            assert!(m.row(a).iter().sum::<BigRational>().is_one());
            let full: BigRational = (0..9).map(|b| m.get(a, b)).sum();
            assert!(full.is_one());
        }
        // 00 -> 11 is not an edge.
        assert!(m.get(0, 4).is_zero());
    }

    #[test]
    fn rejects_bad_distributions() {
        let params = Params::new(3, 2).unwrap();
        let mut s = base_over_45();
        s.swap(1, 3);
        assert!(matches!(markov_matrix(params, &s), Err(Error::NotFlowConserving(_))));
        let doubled: Vec<BigRational> = base_over_45().iter().map(|x| x * ratio(2, 1)).collect();
        assert!(markov_matrix(params, &doubled).is_err());
    }

    #[test]
    fn generation_is_reproducible() {
        let params = Params::new(3, 2).unwrap();
        let s = base_over_45();
        let a = markov_generate(params, &s, 500, 9).unwrap();
        assert_eq!(a, markov_generate(params, &s, 500, 9).unwrap());
        assert_eq!(a.len(), 500);
        assert_eq!(markov_generate(params, &s, 1, 9).unwrap().len(), 1);
    }
}
