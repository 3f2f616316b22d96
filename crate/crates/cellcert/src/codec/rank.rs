//! Colexicographic combinatorial number system for k-subsets of `[0, M)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::tessellation::combinatorics::binomial;

/// `Σ_j C(c_j, j+1)` over the sorted elements `c_0 < … < c_{k−1}`.
pub fn subset_rank(indices: &[usize], m: usize) -> Result<BigUint> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("subset indices must be strictly increasing"));
    }
    if indices.last().is_some_and(|&c| c >= m) {
        return Err(invalid(format!("subset index out of range for M={m}")));
    }
    let mut rank = BigUint::zero();
    for (j, &c) in indices.iter().enumerate() {
        rank += binomial(c as u64, j as u64 + 1);
    }
    Ok(rank)
}

/// Inverse of [`subset_rank`] for `rank < C(M, k)`.
pub fn subset_unrank(rank: &BigUint, m: usize, k: usize) -> Result<Vec<usize>> {
    if k > m {
        return Err(invalid(format!("k={k} exceeds M={m}")));
    }
    if *rank >= binomial(m as u64, k as u64) {
        return Err(invalid(format!("rank out of range for C({m}, {k})")));
    }
    let mut rest = rank.clone();
    let mut out = vec![0usize; k];
    let mut top = m;
    for r in (1..=k).rev() {
        // largest c < top with C(c, r) ≤ rest
        let mut c = top - 1;
        let mut b = binomial(c as u64, r as u64);
        while b > rest {
            b = b * BigUint::from(c - r) / BigUint::from(c);
            c -= 1;
        }
        rest -= &b;
        out[r - 1] = c;
        top = c;
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}

/// `⌈log₂ C(M, k)⌉ + k`.
pub fn bit_cost(m: usize, k: usize) -> Result<u64> {
    if k > m {
        return Err(invalid(format!("k={k} exceeds M={m}")));
    }
    Ok(ceil_log2(&binomial(m as u64, k as u64)) + k as u64)
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_one() || n.is_zero() {
        0
    } else {
        (n - 1u32).bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colex_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
        // all k-subsets sorted by (largest, next largest, …)
        let mut all: Vec<Vec<usize>> = (0u32..1 << m)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        all
    }

    #[test]
    fn rank_examples() {
        assert_eq!(subset_rank(&[0, 1, 2], 5).unwrap(), BigUint::zero());
        assert_eq!(subset_rank(&[1, 2, 3], 5).unwrap(), BigUint::from(3u32));
        let order = colex_subsets(5, 3);
        assert_eq!(order.len(), 10);
        for (i, s) in order.iter().enumerate() {
            assert_eq!(subset_rank(s, 5).unwrap(), BigUint::from(i));
        }
    }

    #[test]
    fn exhaustive_round_trip_small() {
        for m in 0..=12 {
            for k in 0..=m {
                let all = colex_subsets(m, k);
                for (i, s) in all.iter().enumerate() {
                    let r = subset_rank(s, m).unwrap();
                    assert_eq!(r, BigUint::from(i));
                    assert_eq!(&subset_unrank(&r, m, k).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(subset_rank(&[2, 1], 5).is_err());
        assert!(subset_rank(&[1, 1], 5).is_err());
        assert!(subset_rank(&[5], 5).is_err());
        assert!(subset_unrank(&BigUint::from(10u32), 5, 3).is_err());
        assert!(subset_unrank(&BigUint::zero(), 3, 4).is_err());
    }

    #[test]
    fn bit_cost_examples() {
        assert_eq!(bit_cost(8, 2).unwrap(), 7);
        assert_eq!(bit_cost(100, 0).unwrap(), 0);
        assert_eq!(bit_cost(37, 37).unwrap(), 37);
        for (m, k) in [(10, 3), (64, 20), (4096, 150)] {
            let exact = (binomial(m, k).bits() as f64 - 1.0).max(0.0);
            let log2 = big_log2(&binomial(m, k));
            let cost = bit_cost(m as usize, k as usize).unwrap() as f64;
            assert!(cost >= log2 + k as f64 - 1.0 && cost <= log2 + k as f64 + 1.0);
            assert!(cost - k as f64 >= exact);
        }
    }

    fn big_log2(n: &BigUint) -> f64 {
        let bits = n.bits();
        let shift = bits.saturating_sub(52);
        let top: BigUint = n >> shift;
        let v = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        v.log2() + shift as f64
    }
}
