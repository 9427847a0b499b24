//! Witness strings for feasible vectors.

mod compact;
mod euler;
mod markov;

pub use compact::{CompactString, Segment};
pub use euler::{check_connectivity, cycle_decomposition, eulerian_compact, eulerian_string};
pub use markov::{markov_generate, markov_matrix, normalize, uniform, TransitionMatrix};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::feasibility::FeasibleVector;
use crate::math::lcm_of_denominators;
use crate::perm::{satisfies, RankPermutation};
use crate::profile::{profile_of, ProfileVector};

/// Scales by the least common multiple of the denominators.
pub fn integerize(chi: &FeasibleVector) -> FeasibleVector {
    let l = BigRational::from_integer(lcm_of_denominators(chi.entries()));
    chi.affine(&l, &BigRational::from_integer(BigInt::from(0)))
        .expect("positive scaling keeps a feasible vector feasible")
}

/// Reads integer entries as a profile vector.
pub fn to_profile(chi: &FeasibleVector) -> Result<ProfileVector> {
    let counts = chi
        .entries()
        .iter()
        .map(|x| {
            if !x.is_integer() || x.is_negative() {
                return Err(Error::InvalidParams(format!("entry {x} is not a nonnegative integer")));
            }
            Ok(x.to_integer().to_biguint().expect("nonnegative"))
        })
        .collect::<Result<Vec<BigUint>>>()?;
    ProfileVector::new(chi.params(), counts)
}

/// True iff the circular profile of `x` satisfies `pi`.
pub fn verify(x: &[u8], pi: &RankPermutation) -> bool {
    match profile_of(x, pi.params()) {
        Ok(p) => satisfies(p.counts(), pi),
        Err(_) => false,
    }
}
