//! Exact counting facts about central hyperplane arrangements.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{i=0}^{top} C(n, i)`.
pub fn binomial_prefix_sum(n: u64, top: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..top.min(n) {
        term = term * (n - i) / (i + 1);
        sum += &term;
    }
    sum
}

/// Number of cells cut out of `S^{d−1}` by `M` central hyperplanes in general
/// position: `2·Σ_{i<d} C(M−1, i)`.
pub fn schlafli_cell_count(m: u64, d: u64) -> Result<BigUint> {
    if m == 0 || d == 0 {
        return Err(invalid("cell count needs M >= 1 and d >= 1"));
    }
    Ok(binomial_prefix_sum(m - 1, d - 1) * 2u32)
}

/// Geometric-series bound on a binomial prefix sum.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRatioBound {
    /// `Σ_{i=0}^{d} C(M, i)`
    pub lhs: BigUint,
    /// `C(M, d)·(M−d+1)/(M−2d+1)`
    pub rhs: BigRational,
}

impl TailRatioBound {
    pub fn holds(&self) -> bool {
        BigRational::from_integer(self.lhs.clone().into()) <= self.rhs
    }
}

pub fn binom_tail_ratio_bound(m: u64, d: u64) -> Result<TailRatioBound> {
    let denom = m as i128 - 2 * d as i128 + 1;
    if denom <= 0 {
        return Err(invalid(format!("need M − 2d + 1 > 0, got M={m}, d={d}")));
    }
    let lhs = binomial_prefix_sum(m, d);
    let num = binomial(m, d) * (m - d + 1);
    let rhs = BigRational::new(num.into(), BigUint::from(denom as u128).into());
    Ok(TailRatioBound { lhs, rhs })
}

/// Expected number of facets of a uniformly drawn cell:
/// `2M·Σ_{i≤d−2} C(M−2, i) / Σ_{i≤d−1} C(M−1, i)`.
pub fn expected_face_count(m: u64, d: u64) -> Result<BigRational> {
    if m < 2 || d < 2 {
        return Err(invalid("face count needs M >= 2 and d >= 2"));
    }
    let num = binomial_prefix_sum(m - 2, d - 2) * (2 * m);
    let den = binomial_prefix_sum(m - 1, d - 1);
    Ok(BigRational::new(num.into(), den.into()))
}

/// Lossy conversion for reporting.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
