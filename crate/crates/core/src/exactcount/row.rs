use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::bigutil::pow2;

/// Row `n` of Pascal's triangle as exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PascalRow {
    n: usize,
    coeffs: Vec<BigUint>,
}

impl PascalRow {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigUint {
        &self.coeffs[i]
    }

    /// The half-sum `2^{n−1}` each side of a bisection must reach.
    pub fn target(&self) -> Option<BigUint> {
        (self.n >= 1).then(|| pow2(self.n as u64 - 1))
    }

    /// The row as machine words, when every entry (and the row sum) fits.
    pub(crate) fn as_u64(&self) -> Option<Vec<u64>> {
        if self.n > 63 {
            return None;
        }
        self.coeffs.iter().map(|c| c.to_u64()).collect()
    }
}

/// Exact row `n`, built with `C(n,i+1) = C(n,i)·(n−i)/(i+1)` and mirrored.
pub fn pascal_row(n: usize) -> PascalRow {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for i in 0..=n / 2 {
        coeffs.push(c.clone());
        c *= (n - i) as u64;
        c /= (i + 1) as u64;
    }
    for i in (n / 2 + 1)..=n {
        let mirror = coeffs[n - i].clone();
        coeffs.push(mirror);
    }
    PascalRow { n, coeffs }
}

/// Streams `C(n,0), C(n,1), …, C(n,n)` without holding the row.
pub(crate) fn for_each_binomial(n: usize, mut f: impl FnMut(usize, &BigUint)) {
    let mut c = BigUint::one();
    for i in 0..=n {
        f(i, &c);
        if i < n {
            c *= (n - i) as u64;
            c /= (i + 1) as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn factorial(n: usize) -> BigUint {
        (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
    }

    #[test]
    fn row_four_by_hand() {
        let row = pascal_row(4);
        let expect: Vec<BigUint> = [1u32, 4, 6, 4, 1].iter().map(|&v| v.into()).collect();
        assert_eq!(row.coeffs(), &expect[..]);
    }

    #[test]
    fn row_eight_sum_and_middle() {
        let row = pascal_row(8);
        let sum: BigUint = row.coeffs().iter().sum();
        assert_eq!(sum, BigUint::from(256u32));
        assert_eq!(row.coeff(4), &BigUint::from(70u32));
        assert_eq!(row.target(), Some(BigUint::from(128u32)));
    }

    #[test]
    fn row_29_matches_factorial_quotient() {
        let row = pascal_row(29);
        for k in 0..=29 {
            let oracle = factorial(29) / (factorial(k) * factorial(29 - k));
            assert_eq!(row.coeff(k), &oracle, "C(29,{k})");
        }
    }

    #[test]
    fn row_invariants_hold_up_to_70() {
        for n in 0..=70 {
            let row = pascal_row(n);
            let c = row.coeffs();
            assert_eq!(c.len(), n + 1);
            assert!(c[0].is_one() && c[n].is_one());
            for i in 0..=n {
                assert_eq!(c[i], c[n - i]);
            }
            let sum: BigUint = c.iter().sum();
            assert_eq!(sum, pow2(n as u64));
        }
    }

    #[test]
    fn streaming_agrees_with_row() {
        let row = pascal_row(41);
        let mut seen = 0;
        for_each_binomial(41, |i, c| {
            assert_eq!(c, row.coeff(i));
            seen += 1;
        });
        assert_eq!(seen, 42);
        assert!(pascal_row(0).target().is_none());
        assert!(!pascal_row(1).coeff(1).is_zero());
    }
}
