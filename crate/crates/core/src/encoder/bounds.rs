//! Counting, rate and length formulas for the encoders' output sets.

use num_bigint::BigUint;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::math::{binomial, factorial};
use crate::word::Params;

use super::info::{layer_domain_size, F32};

fn check(params: Params, min_ell: usize) -> Result<()> {
    if params.q < 3 || params.ell < min_ell {
        return Err(Error::InvalidParams(format!(
            "formula needs q >= 3 and ell >= {min_ell}, got {params}"
        )));
    }
    Ok(())
}

/// Number of distinct permutations the general encoder produces:
/// `f32 * prod_{j=4..q} j! C(j^2-j+1, j) * prod_{i=3..ell} (q!)^|A_i|`.
pub fn count_lower_bound(params: Params) -> Result<BigUint> {
    check(params, 2)?;
    let Params { q, ell } = params;
    let mut n = BigUint::from(F32);
    for j in 4..=q as u64 {
        n *= factorial(j) * binomial(j * j - j + 1, j);
    }
    let qf = factorial(q as u64);
    for i in 3..=ell {
        n *= Pow::pow(&qf, layer_domain_size(q, i));
    }
    Ok(n)
}

/// `log(q!) (q-1) (q^(ell-2) - 1) / (ell q^ell log q)`.
pub fn rate_lower_bound(params: Params) -> Result<f64> {
    check(params, 3)?;
    let Params { q, ell } = params;
    let qf = q as f64;
    let lnf: f64 = (2..=q).map(|k| (k as f64).ln()).sum();
    Ok(lnf * (qf - 1.0) * (qf.powi(ell as i32 - 2) - 1.0) / (ell as f64 * qf.powi(ell as i32) * qf.ln()))
}

/// Upper bounds on the largest entry and on string lengths of encoder outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthBounds {
    pub params: Params,
    pub c3: u64,
    /// `c_q <= 2^(q-3) (q!/6) ((q+1)!/24) c_3`.
    pub c_q: BigUint,
    /// `q^2 c_q`.
    pub len_q2: BigUint,
    /// `c_{q,ell} <= c_q (3 q^(q^2))^(ell-2)`.
    pub c_q_ell: BigUint,
    /// `q^ell c_{q,ell}`, the sum-of-entries bound.
    pub len_q_ell: BigUint,
    /// The closed form `c_3 (2^(q-3) (q!/6) ((q+1)!/24) / (2 q^2)) 3^(ell-2) (q^ell)^(q^2+1)`, floored.
    pub closed_form: BigUint,
}

pub fn length_bounds(params: Params, c3: u64) -> Result<LengthBounds> {
    check(params, 2)?;
    if c3 == 0 {
        return Err(Error::InvalidParams("c3 must be positive".into()));
    }
    let Params { q, ell } = params;
    let growth = (BigUint::from(1u32) << (q - 3)) * (factorial(q as u64) / 6u32) * (factorial(q as u64 + 1) / 24u32);
    let c_q = &growth * c3;
    let qb = BigUint::from(q);
    let len_q2 = &c_q * q * q;
    let step = Pow::pow(&qb, q * q) * 3u32;
    let c_q_ell = &c_q * Pow::pow(&step, ell - 2);
    let len_q_ell = &c_q_ell * Pow::pow(&qb, ell);
    let closed_form = growth * c3 * Pow::pow(BigUint::from(3u32), ell - 2) * Pow::pow(&qb, ell * (q * q + 1))
        / (BigUint::from(2u32) * q * q);
    Ok(LengthBounds { params, c3, c_q, len_q2, c_q_ell, len_q_ell, closed_form })
}
