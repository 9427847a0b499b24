//! Deciding whether a rank permutation is realized by some circular string.
//!
//! A permutation is feasible iff some vector `chi >= 1` satisfies it with
//! gaps of at least one between consecutive ranks and conserves flow at
//! every (ell-1)-word. Writing `chi` along the rank order as
//! `chi(w_k) = k + d_1 + ... + d_k` with `d >= 0` turns every inequality
//! into a sign constraint, leaving only the flow equalities `A d = b`.

mod bounds;
mod precheck;
pub(crate) mod simplex;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use bounds::{alpha_star_lower, upper_bound, UpperBound, EXACT_BOUND_MAX_WORDS};
pub use precheck::{ballot_color, matching_precheck, node_color, Color, MatchingWitness};

use crate::error::{Error, Result};
use crate::perm::{satisfies, RankPermutation};
use crate::profile::flow_violation;
use crate::word::Params;
use simplex::{phase_one, Phase1};

/// A strictly positive, pairwise-distinct, flow-conserving vector over `Sigma^ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeasibleVector {
    params: Params,
    entries: Vec<BigRational>,
}

impl FeasibleVector {
    /// Validates all invariants: entries `>= 1`, pairwise distinct, flow-conserving.
    pub fn new(params: Params, entries: Vec<BigRational>) -> Result<Self> {
        check_feasible_entries(params, &entries)?;
        Ok(FeasibleVector { params, entries })
    }

    pub fn from_integers<I: Into<BigInt>>(params: Params, entries: impl IntoIterator<Item = I>) -> Result<Self> {
        Self::new(params, entries.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    /// Integer entries, when every entry is an integer.
    pub fn integer_entries(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.entries.iter().map(|x| x.to_integer()).collect())
    }

    pub fn permutation(&self) -> RankPermutation {
        crate::perm::rank_of(self.params, &self.entries).expect("feasible entries are distinct")
    }

    /// `alpha * chi + beta * 1`, which keeps order and flow for `alpha > 0, beta >= 0`.
    pub fn affine(&self, alpha: &BigRational, beta: &BigRational) -> Result<Self> {
        if !alpha.is_positive() || beta.is_negative() {
            return Err(Error::InvalidParams("affine map needs alpha > 0 and beta >= 0".into()));
        }
        Self::new(self.params, self.entries.iter().map(|x| x * alpha + beta).collect())
    }
}

pub(crate) fn check_feasible_entries(params: Params, entries: &[BigRational]) -> Result<()> {
    if entries.len() != params.num_words() {
        return Err(Error::LengthMismatch { expected: params.num_words(), got: entries.len() });
    }
    if let Some(i) = entries.iter().position(|x| *x < BigRational::one()) {
        return Err(Error::InvalidParams(format!("entry of {} is below 1", params.word(i))));
    }
    crate::perm::rank_of(params, entries)?;
    if params.ell >= 2 {
        if let Some(v) = flow_violation(params, entries) {
            return Err(Error::NotFlowConserving(
                crate::word::Word::from_index(params.q, params.ell - 1, v).to_string(),
            ));
        }
    }
    Ok(())
}

/// Why a permutation is infeasible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InfeasibilityWitness {
    Matching(MatchingWitness),
    /// Node weights `y` with `A^T y <= 0` and `b^T y > 0` for the gap system `A d = b`.
    Farkas(Vec<BigRational>),
}

impl InfeasibilityWitness {
    /// Re-derives the certificate's claim from `pi` in exact arithmetic.
    pub fn certifies(&self, pi: &RankPermutation) -> bool {
        match self {
            InfeasibilityWitness::Matching(w) => {
                pi.params().ell >= 2
                    && w.node.len() + 1 == pi.params().ell
                    && node_color(pi, w.node.index()) == Some(w.color)
            }
            InfeasibilityWitness::Farkas(y) => {
                let (a, b) = gap_system(pi);
                if y.len() != a.len() {
                    return false;
                }
                let by: BigRational = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
                let cols_ok = (0..pi.params().num_words()).all(|j| {
                    let col: BigRational = a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum();
                    !col.is_positive()
                });
                by.is_positive() && cols_ok
            }
        }
    }
}

impl fmt::Display for InfeasibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibilityWitness::Matching(w) => write!(f, "{w}"),
            InfeasibilityWitness::Farkas(y) => {
                let ys: Vec<String> = y.iter().map(|v| v.to_string()).collect();
                write!(f, "farkas y={}", ys.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Feasible(FeasibleVector),
    Infeasible(InfeasibilityWitness),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn vector(&self) -> Option<&FeasibleVector> {
        match self {
            Verdict::Feasible(v) => Some(v),
            Verdict::Infeasible(_) => None,
        }
    }

    /// One status line, followed by the integerized profile for feasible verdicts.
    pub fn to_text(&self) -> String {
        match self {
            Verdict::Feasible(chi) => {
                let int = crate::synthesis::integerize(chi);
                let profile = crate::synthesis::to_profile(&int).expect("integerized entries are positive");
                format!("status=feasible\n{}", profile.to_text())
            }
            Verdict::Infeasible(w) => format!("status=infeasible {w}\n"),
        }
    }
}

/// Flow equalities in gap variables: row `v` is `out_v(chi) - in_v(chi) = 0`.
pub(crate) fn gap_system(pi: &RankPermutation) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let params = pi.params();
    let n = params.num_words();
    let mut a = Vec::with_capacity(params.num_nodes());
    let mut b = Vec::with_capacity(params.num_nodes());
    for v in 0..params.num_nodes() {
        // Net (+1 out, -1 in) per word; self-loops cancel.
        let mut net = vec![0i64; n + 1];
        for sigma in 0..params.q {
            net[pi.rank(params.out_edge(v, sigma))] += 1;
            net[pi.rank(params.in_edge(v, sigma))] -= 1;
        }
        // Coefficient of d_j counts net words with rank >= j.
        let mut row = vec![BigRational::zero(); n];
        let mut acc = 0i64;
        for j in (1..=n).rev() {
            acc += net[j];
            row[j - 1] = BigRational::from_integer(BigInt::from(acc));
        }
        let rhs: i64 = -(1..=n).map(|r| r as i64 * net[r]).sum::<i64>();
        a.push(row);
        b.push(BigRational::from_integer(BigInt::from(rhs)));
    }
    (a, b)
}

/// Decides feasibility with an exact LP; the matching precheck short-circuits
/// only when it fires, since it is a necessary condition.
pub fn decide(pi: &RankPermutation) -> Verdict {
    let params = pi.params();
    let order = pi.order();
    if params.ell == 1 {
        let mut entries = vec![BigRational::zero(); params.num_words()];
        for (k, &w) in order.iter().enumerate() {
            entries[w] = BigRational::from_integer(BigInt::from(k + 1));
        }
        return Verdict::Feasible(FeasibleVector { params, entries });
    }
    if let Some(w) = matching_precheck(pi) {
        return Verdict::Infeasible(InfeasibilityWitness::Matching(w));
    }
    decide_lp(pi)
}

/// The LP alone, without the precheck.
pub fn decide_lp(pi: &RankPermutation) -> Verdict {
    let params = pi.params();
    if params.ell == 1 {
        return decide(pi);
    }
    let (a, b) = gap_system(pi);
    match phase_one(&a, &b) {
        Phase1::Feasible(d) => {
            let mut entries = vec![BigRational::zero(); params.num_words()];
            let mut level = BigRational::zero();
            for (k, &w) in pi.order().iter().enumerate() {
                level += BigRational::one() + &d[k];
                entries[w] = level.clone();
            }
            debug_assert!(satisfies(&entries, pi));
            debug_assert!(check_feasible_entries(params, &entries).is_ok());
            Verdict::Feasible(FeasibleVector { params, entries })
        }
        Phase1::Infeasible(y) => Verdict::Infeasible(InfeasibilityWitness::Farkas(y)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::next_permutation;

    fn p(q: usize, ell: usize) -> Params {
        Params::new(q, ell).unwrap()
    }

    fn assert_valid(chi: &FeasibleVector, pi: &RankPermutation) {
        assert!(satisfies(chi.entries(), pi));
        check_feasible_entries(chi.params(), chi.entries()).unwrap();
    }

    #[test]
    fn example_pi_is_feasible() {
        let pi = RankPermutation::parse_text(p(3, 2), "00,01,10,20,02,11,12,21,22").unwrap();
        let v = decide(&pi);
        let chi = v.vector().expect("feasible");
        assert_valid(chi, &pi);
        assert!(FeasibleVector::from_integers(p(3, 2), [1, 2, 5, 3, 6, 7, 4, 8, 9]).is_ok());
    }

    #[test]
    fn binary_alphabet_is_never_feasible() {
        let params = p(2, 2);
        let mut order = [0, 1, 2, 3];
        loop {
            let pi = RankPermutation::from_order(params, &order).unwrap();
            let Verdict::Infeasible(w) = decide_lp(&pi) else { panic!("{pi} feasible") };
            assert!(w.certifies(&pi));
            assert!(!decide(&pi).is_feasible());
            if !next_permutation(&mut order) {
                break;
            }
        }
    }

    #[test]
    fn ell_one_always_feasible() {
        let params = p(3, 1);
        let mut order = [0, 1, 2];
        let mut count = 0;
        loop {
            let pi = RankPermutation::from_order(params, &order).unwrap();
            let v = decide(&pi);
            assert_valid(v.vector().unwrap(), &pi);
            count += 1;
            if !next_permutation(&mut order) {
                break;
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn lp_agrees_with_precheck_and_certificates_hold() {
        // Every permutation with the node-A pattern CA < GA < AC < AG is infeasible.
        let pi = RankPermutation::parse_text(p(3, 2), "10,20,01,02,00,11,12,21,22").unwrap();
        let Verdict::Infeasible(w) = decide_lp(&pi) else { panic!() };
        assert!(matches!(w, InfeasibilityWitness::Farkas(_)));
        assert!(w.certifies(&pi));
        let Verdict::Infeasible(w) = decide(&pi) else { panic!() };
        assert!(matches!(w, InfeasibilityWitness::Matching(_)));
        assert!(w.certifies(&pi));
    }

    #[test]
    fn deterministic_vectors() {
        let pi = RankPermutation::parse_text(p(3, 2), "00,01,10,20,02,11,12,21,22").unwrap();
        assert_eq!(decide(&pi), decide(&pi));
    }

    #[test]
    fn scaling_closure() {
        let pi = RankPermutation::parse_text(p(3, 2), "00,01,10,20,02,11,12,21,22").unwrap();
        let chi = decide(&pi).vector().unwrap().clone();
        let alpha = crate::math::ratio(7, 3);
        let beta = crate::math::ratio(5, 2);
        let scaled = chi.affine(&alpha, &beta).unwrap();
        assert_valid(&scaled, &pi);
        assert!(chi.affine(&BigRational::zero(), &beta).is_err());
    }

    #[test]
    fn feasible_vector_rejects_violations() {
        assert!(matches!(
            FeasibleVector::from_integers(p(3, 2), [1, 10, 5, 3, 6, 7, 4, 8, 9]),
            Err(Error::NotFlowConserving(_))
        ));
        assert!(FeasibleVector::from_integers(p(3, 2), [0, 2, 5, 3, 6, 7, 4, 8, 9]).is_err());
        assert!(matches!(
            FeasibleVector::from_integers(p(3, 1), [1, 1, 2]),
            Err(Error::Tie(..))
        ));
    }

    #[test]
    fn sampled_three_three_verdicts_are_sound() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let params = p(3, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut order: Vec<usize> = (0..27).collect();
        for _ in 0..40 {
            order.shuffle(&mut rng);
            let pi = RankPermutation::from_order(params, &order).unwrap();
            match decide_lp(&pi) {
                Verdict::Feasible(chi) => {
                    assert_valid(&chi, &pi);
                    assert!(matching_precheck(&pi).is_none());
                }
                Verdict::Infeasible(w) => assert!(w.certifies(&pi)),
            }
        }
    }
}
