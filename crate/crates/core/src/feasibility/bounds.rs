//! Upper bounds on the number of feasible permutations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

use crate::error::{Error, Result};
use crate::math::{factorial, ln_factorial};
use crate::word::Params;

/// Largest `q^ell` for which the bound is also produced as an exact rational.
pub const EXACT_BOUND_MAX_WORDS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBound {
    pub params: Params,
    /// Exponent applied to `(q-1)/(q+1)`; `1` for `ell = 2`.
    pub exponent: u64,
    /// Exact value, omitted when `q^ell` exceeds [`EXACT_BOUND_MAX_WORDS`].
    pub exact: Option<BigRational>,
    pub log10: f64,
}

impl UpperBound {
    pub fn to_f64(&self) -> Option<f64> {
        self.exact.as_ref().and_then(|r| r.to_f64()).filter(|x| x.is_finite())
    }
}

/// Certified lower bound `ceil((q^ell - q^(ell-2)) / 4)` on the loopless
/// independence number of the order-`ell` DeBruijn graph.
pub fn alpha_star_lower(params: Params) -> Result<u64> {
    let Params { q, ell } = params;
    if ell < 2 {
        return Err(Error::InvalidParams("alpha* bound needs ell >= 2".into()));
    }
    let q = q as u64;
    let top = q.pow(ell as u32) - q.pow(ell as u32 - 2);
    Ok(top.div_ceil(4))
}

/// `F_{q,2} <= (q^2)! (q-1)/(q+1)`, and for `ell >= 3`
/// `F_{q,ell} <= (q^ell)! ((q-1)/(q+1))^a` with `a = alpha_star_lower(q, ell-1)`.
pub fn upper_bound(params: Params) -> Result<UpperBound> {
    let Params { q, ell } = params;
    if q < 3 || ell < 2 {
        return Err(Error::InvalidParams(format!(
            "upper bound holds for q >= 3 and ell >= 2, got q={q} ell={ell}"
        )));
    }
    let exponent = if ell == 2 { 1 } else { alpha_star_lower(Params::new(q, ell - 1)?)? };
    let n = params.num_words() as u64;
    let base = BigRational::new(BigInt::from(q - 1), BigInt::from(q + 1));
    let exact = (params.num_words() <= EXACT_BOUND_MAX_WORDS).then(|| {
        BigRational::from_integer(BigInt::from(factorial(n))) * Pow::pow(base, exponent)
    });
    let log10 = (ln_factorial(n) + exponent as f64 * ((q - 1) as f64 / (q + 1) as f64).ln())
        / std::f64::consts::LN_10;
    Ok(UpperBound { params, exponent, exact, log10 })
}
