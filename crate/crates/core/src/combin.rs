//! Exact integer combinatorics: binomials, factorials, subset iteration.
//!
//! Everything here is arbitrary precision. Several downstream formulas
//! (family sizes for n around 40) have factorial intermediates that overflow
//! u128, so there are no fixed-width shortcuts in the arithmetic layer.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Signed binomial, convenient inside formulas that mix signs.
pub fn binomial_int(n: u64, k: u64) -> BigInt {
    BigInt::from(binomial(n, k))
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for j in 2..=n {
        acc *= BigUint::from(j);
    }
    acc
}

/// Iterates all `k`-subsets of the low `n` bit positions as bitmasks, in
/// increasing numeric order (Gosper's hack).
pub fn subsets_of_size(n: u32, k: u32) -> SubsetIter {
    debug_assert!(n <= 64);
    let start = if k == 0 {
        0
    } else if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    };
    SubsetIter {
        n,
        k,
        next: Some(start),
    }
}

pub struct SubsetIter {
    n: u32,
    k: u32,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.k > self.n {
            return None;
        }
        let cur = self.next?;
        if self.k == 0 {
            self.next = None;
            return Some(0);
        }
        // Gosper: next mask with the same popcount.
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        let succ = (((r ^ cur) >> 2) / c) | r;
        let limit = if self.n >= 64 { u64::MAX } else { 1u64 << self.n };
        self.next = if self.n < 64 && succ >= limit {
            None
        } else if self.n >= 64 && succ < cur {
            None // wrapped
        } else {
            Some(succ)
        };
        Some(cur)
    }
}

/// Spreads the low bits of `compact` onto the set positions of `positions`
/// (a software PDEP). Bit j of `compact` lands on the j-th lowest set bit of
/// `positions`. Monotone: larger `compact` gives a larger result, so subset
/// enumeration order is preserved through the expansion.
pub fn expand_bits(compact: u64, mut positions: u64) -> u64 {
    let mut out = 0u64;
    let mut j = 0;
    while positions != 0 {
        let p = positions.trailing_zeros();
        if (compact >> j) & 1 == 1 {
            out |= 1u64 << p;
        }
        positions &= positions - 1;
        j += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(7, 4), BigUint::from(35u32));
        assert_eq!(binomial(36, 33), BigUint::from(7140u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
        // 39! needs ~139 bits; just check it round-trips through the identity
        // n! = n * (n-1)!.
        assert_eq!(factorial(39), factorial(38) * BigUint::from(39u32));
    }

    #[test]
    fn gosper_enumerates_in_order() {
        let all: Vec<u64> = subsets_of_size(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|m| m.count_ones() == 2 && *m < 32));
    }

    #[test]
    fn gosper_edge_cases() {
        assert_eq!(subsets_of_size(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets_of_size(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert_eq!(subsets_of_size(2, 3).count(), 0);
    }

    #[test]
    fn expand_is_monotone() {
        let positions = 0b1011010u64;
        let mut prev = None;
        for compact in 0..(1u64 << positions.count_ones()) {
            let e = expand_bits(compact, positions);
            assert_eq!(e & !positions, 0);
            if let Some(p) = prev {
                assert!(e > p);
            }
            prev = Some(e);
        }
    }
}
