//! The two recursive encoders, their decoders and the counting formulas.

mod alg_a;
mod alg_b;
mod bounds;
mod info;
mod repository;

pub use alg_a::{algorithm_a_step, choose_y, decode_a, decode_a_vector, encode_a, encode_a_from, interleave};
pub use alg_b::{algorithm_b_step, decode_b, decode_b_vector, encode_b, ScaledVector};
pub use bounds::{count_lower_bound, length_bounds, rate_lower_bound, LengthBounds};
pub use info::{layer_domain, layer_domain_size, InfoVecA, InfoVecB, StageA, F32};
pub use repository::Repository;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::perm::rank_of;
use crate::profile::flow_violation;
use crate::word::{Params, Word};

/// Exact checks on an encoder output: positive, pairwise distinct, flow-conserving.
pub fn validate_output(params: Params, chi: &[BigUint]) -> Result<()> {
    if chi.len() != params.num_words() {
        return Err(Error::LengthMismatch { expected: params.num_words(), got: chi.len() });
    }
    if let Some(i) = chi.iter().position(Zero::is_zero) {
        return Err(Error::Internal(format!("entry of {} is zero", params.word(i))));
    }
    rank_of(params, chi)?;
    if let Some(v) = flow_violation(params, chi) {
        return Err(Error::NotFlowConserving(Word::from_index(params.q, params.ell - 1, v).to_string()));
    }
    Ok(())
}
