//! The bijection between bisections of row `n` and 0/1 arrays of length
//! `n + 1` whose `n`-th finite difference vanishes.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigutil::binomial;
use crate::error::{Error, Result};
use crate::exactcount::{is_solution, SignVector};

/// Largest `n` accepted by [`count_zero_ndiff`].
pub const ZERO_NDIFF_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferenceArray {
    pub values: Vec<BigInt>,
}

impl DifferenceArray {
    pub fn new(values: Vec<BigInt>) -> Self {
        DifferenceArray { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        DifferenceArray {
            values: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Values as `i64`, when they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.values.iter().map(|v| i64::try_from(v).ok()).collect()
    }
}

/// `[a_1 − a_0, a_2 − a_1, …]`.
pub fn delta(a: &DifferenceArray) -> Result<DifferenceArray> {
    if a.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "difference needs at least two values, got {}",
            a.len()
        )));
    }
    Ok(DifferenceArray {
        values: a.values.windows(2).map(|w| &w[1] - &w[0]).collect(),
    })
}

/// `Δ^k(a)_i = Σ_t (−1)^t C(k,t) a_{i+k−t}`, evaluated directly.
pub fn delta_k_direct(a: &DifferenceArray, k: usize) -> Result<DifferenceArray> {
    check_k(a, k)?;
    let coeffs: Vec<BigInt> = (0..=k)
        .map(|t| {
            let c = BigInt::from(binomial(k as u64, t as u64));
            if t % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let values = (0..a.len() - k)
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .map(|(t, c)| c * &a.values[i + k - t])
                .sum()
        })
        .collect();
    Ok(DifferenceArray { values })
}

fn check_k(a: &DifferenceArray, k: usize) -> Result<()> {
    if k == 0 || k >= a.len() {
        return Err(Error::InvalidArgument(format!(
            "order must lie in 1..={}, got {k}",
            a.len().saturating_sub(1)
        )));
    }
    Ok(())
}

/// `k`-fold difference, checked against the direct binomial formula.
pub fn delta_k(a: &DifferenceArray, k: usize) -> Result<DifferenceArray> {
    check_k(a, k)?;
    let mut cur = a.clone();
    for _ in 0..k {
        cur = delta(&cur)?;
    }
    if cur != delta_k_direct(a, k)? {
        return Err(Error::CheckFailed(format!(
            "iterated and direct {k}-th differences disagree"
        )));
    }
    Ok(cur)
}

/// `a_i = ((−1)^i δ_i + 1)/2`.
pub fn solution_to_array(v: &SignVector) -> Result<DifferenceArray> {
    if !is_solution(v) {
        return Err(Error::NotASolution { n: v.n() });
    }
    Ok(DifferenceArray {
        values: v
            .bits()
            .iter()
            .enumerate()
            .map(|(i, &b)| BigInt::from(u8::from(b ^ (i % 2 == 1))))
            .collect(),
    })
}

/// Inverse of [`solution_to_array`].
pub fn array_to_solution(a: &DifferenceArray) -> Result<SignVector> {
    if a.len() < 2 {
        return Err(Error::Malformed("array needs at least two values".into()));
    }
    let one = BigInt::one();
    let mut bits = Vec::with_capacity(a.len());
    for (i, v) in a.values.iter().enumerate() {
        let bit = if v.is_zero() {
            false
        } else if *v == one {
            true
        } else {
            return Err(Error::Malformed(format!("entry {i} is {v}, not 0 or 1")));
        };
        bits.push(bit ^ (i % 2 == 1));
    }
    let n = a.len() - 1;
    if !delta_k(a, n)?.is_zero() {
        return Err(Error::NotASolution { n });
    }
    let v = SignVector::new(n, bits)?;
    debug_assert!(is_solution(&v));
    Ok(v)
}

/// Exhaustive count of 0/1 arrays of length `n + 1` with `Δ^n = [0]`.
pub fn count_zero_ndiff(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > ZERO_NDIFF_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: ZERO_NDIFF_CAP,
        });
    }
    let len = n + 1;
    let high = len.min(6);
    let low = len - high;
    let count = (0u64..1 << high)
        .into_par_iter()
        .map(|top| {
            let mut hits = 0u64;
            let mut buf = [0i64; ZERO_NDIFF_CAP + 1];
            for rest in 0u64..1 << low {
                let mask = top << low | rest;
                for (i, slot) in buf[..len].iter_mut().enumerate() {
                    *slot = (mask >> i & 1) as i64;
                }
                for round in 1..len {
                    for i in 0..len - round {
                        buf[i] = buf[i + 1] - buf[i];
                    }
                }
                hits += u64::from(buf[0] == 0);
            }
            hits
        })
        .sum();
    Ok(count)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcount::{enumerate_solutions, CountConfig, SolutionFilter};
    use proptest::prelude::*;

    const WORKED: [i64; 9] = [1, 1, 0, 0, 1, 1, 0, 1, 1];

    #[test]
    fn delta_examples() {
        let a = DifferenceArray::from_i64(&WORKED);
        assert_eq!(delta(&a).unwrap(), DifferenceArray::from_i64(&[0, -1, 0, 1, 0, -1, 1, 0]));
        assert!(delta(&DifferenceArray::from_i64(&[5; 6])).unwrap().is_zero());
        assert_eq!(delta(&DifferenceArray::from_i64(&[0, 1])).unwrap(), DifferenceArray::from_i64(&[1]));
        assert!(delta(&DifferenceArray::from_i64(&[1])).is_err());
    }

    #[test]
    fn worked_chain() {
        let a = DifferenceArray::from_i64(&WORKED);
        assert_eq!(delta_k(&a, 8).unwrap(), DifferenceArray::from_i64(&[0]));
        assert_eq!(delta_k(&a, 7).unwrap(), DifferenceArray::from_i64(&[-7, -7]));
        assert_eq!(delta_k(&DifferenceArray::from_i64(&[3; 5]), 4).unwrap(), DifferenceArray::from_i64(&[0]));
        assert!(delta_k(&a, 9).is_err());
        assert!(delta_k(&a, 0).is_err());
    }

    #[test]
    fn worked_solution() {
        let v = SignVector::from_signs(&[1, -1, -1, 1, 1, -1, -1, -1, 1]).unwrap();
        let a = solution_to_array(&v).unwrap();
        assert_eq!(a, DifferenceArray::from_i64(&WORKED));
        assert_eq!(array_to_solution(&a).unwrap(), v);
        let alt = SignVector::alternating(8, true);
        assert_eq!(solution_to_array(&alt).unwrap(), DifferenceArray::from_i64(&[1; 9]));
        let alt = SignVector::alternating(8, false);
        assert_eq!(solution_to_array(&alt).unwrap(), DifferenceArray::from_i64(&[0; 9]));
        assert_eq!(array_to_solution(&DifferenceArray::from_i64(&[1; 9])).unwrap(), SignVector::alternating(8, true));
    }

    #[test]
    fn rejects_bad_arrays() {
        assert_eq!(
            array_to_solution(&DifferenceArray::from_i64(&[1, 0, 1])),
            Err(Error::NotASolution { n: 2 })
        );
        assert!(matches!(
            array_to_solution(&DifferenceArray::from_i64(&[1, 2, 1])),
            Err(Error::Malformed(_))
        ));
        let not_solution = SignVector::parse(2, "111").unwrap();
        assert!(solution_to_array(&not_solution).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(count_zero_ndiff(8).unwrap(), 6);
        assert_eq!(count_zero_ndiff(13).unwrap(), 144);
        assert_eq!(count_zero_ndiff(2).unwrap(), 2);
        assert!(count_zero_ndiff(21).is_err());
    }

    #[test]
    fn bijection_small_orders() {
        let cfg = CountConfig::default();
        for n in 1..=12 {
            let sols: Vec<SignVector> = enumerate_solutions(n, SolutionFilter::All, &cfg).unwrap().collect();
            let mut images = std::collections::BTreeSet::new();
            for v in &sols {
                let a = solution_to_array(v).unwrap();
                assert_eq!(&array_to_solution(&a).unwrap(), v);
                images.insert(a.to_i64().unwrap());
            }
            assert_eq!(images.len() as u64, count_zero_ndiff(n).unwrap(), "n={n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn iterated_matches_direct(values in prop::collection::vec(-1000i64..1000, 2..25), frac in 0.0f64..1.0) {
            let a = DifferenceArray::from_i64(&values);
            let k = 1 + ((values.len() - 1) as f64 * frac) as usize;
            let k = k.min(values.len() - 1);
            prop_assert!(delta_k(&a, k).is_ok());
            prop_assert_eq!(delta_k(&a, k).unwrap().len(), values.len() - k);
        }
    }
}
