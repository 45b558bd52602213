use serde::{Deserialize, Serialize};

use super::count::{check_budget, check_order, join_bytes, trivial_count, CountConfig};
use super::mitm;
use super::row::pascal_row;
use super::sign::SignVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionFilter {
    All,
    NontrivialOnly,
}

/// Solutions of one row, in lexicographically decreasing bit-string order.
#[derive(Debug)]
pub struct Solutions {
    n: usize,
    row: Vec<u64>,
    target: u64,
    keys: std::vec::IntoIter<u64>,
}

impl Iterator for Solutions {
    type Item = SignVector;

    fn next(&mut self) -> Option<SignVector> {
        let key = self.keys.next()?;
        let sum: u64 = (0..=self.n)
            .filter(|&i| key >> (self.n - i) & 1 == 1)
            .map(|i| self.row[i])
            .sum();
        assert_eq!(sum, self.target, "emitted vector {key:#b} is not a bisection");
        Some(SignVector::from_lex_key(self.n, key))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.keys.size_hint()
    }
}

impl ExactSizeIterator for Solutions {}

/// Lists every solution of row `n` exactly once, largest bit string first.
pub fn enumerate_solutions(
    n: usize,
    filter: SolutionFilter,
    config: &CountConfig,
) -> Result<Solutions> {
    let keys = solution_keys(n, filter, config)?;
    let row = pascal_row(n).as_u64().expect("checked by solution_keys");
    Ok(Solutions {
        n,
        row,
        target: 1 << (n - 1),
        keys: keys.into_iter(),
    })
}

/// Mask with one bit per index of a row `n`.
pub(crate) fn full_mask(n: usize) -> u64 {
    u64::MAX >> (63 - n)
}

/// Reverses the `n + 1` low bits of `key`.
pub(crate) fn reverse_key(n: usize, key: u64) -> u64 {
    key.reverse_bits() >> (63 - n)
}

pub(crate) fn is_trivial_key(n: usize, key: u64) -> bool {
    let full = full_mask(n);
    // index i lives at bit n − i, so even indices sit at bits ≡ n (mod 2)
    let alt = (0..=n).filter(|i| i % 2 == 0).fold(0u64, |acc, i| acc | 1 << (n - i));
    if key == alt || key == full ^ alt {
        return true;
    }
    n % 2 == 1 && reverse_key(n, key) == full ^ key
}

/// Solution keys (bit `n − i` holds `δ_i = +1`), sorted descending.
pub(crate) fn solution_keys(
    n: usize,
    filter: SolutionFilter,
    config: &CountConfig,
) -> Result<Vec<u64>> {
    check_order(n)?;
    if n > 63 {
        return Err(Error::ResourceLimit {
            what: format!("enumeration key width for row {n} (bits)"),
            needed: n as u128 + 1,
            budget: 64,
        });
    }
    let tables = join_bytes(n, n, 8);
    check_budget("tagged subset-sum tables", tables, config)?;

    let row = pascal_row(n).as_u64().expect("n ≤ 63");
    let target = 1u64 << (n - 1);
    let rest = target - row[0];
    let half = mitm::count_subsets(&row[1..], &rest);
    let total = 2 * half as u128;
    let expected = match filter {
        SolutionFilter::All => total,
        SolutionFilter::NontrivialOnly => {
            total - u128::try_from(&trivial_count(n)).expect("small for n ≤ 63")
        }
    };
    check_budget("solution list", tables + expected * 8, config)?;

    let full = full_mask(n);
    let tags: Vec<u64> = (1..=n).map(|i| 1u64 << (n - i)).collect();
    let lead = 1u64 << n;
    let mut keys = Vec::with_capacity(expected as usize);
    mitm::matching_subsets(&row[1..], &tags, &rest, |m| {
        let key = lead | m;
        if filter == SolutionFilter::All || !is_trivial_key(n, key) {
            keys.push(key);
            keys.push(full ^ key);
        }
    });
    if keys.len() as u128 != expected {
        return Err(Error::CheckFailed(format!(
            "row {n}: joined {} vectors, counted {expected}",
            keys.len()
        )));
    }
    keys.sort_unstable_by(|a, b| b.cmp(a));
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcount::sign::{classify, Classification};

    fn list(n: usize, f: SolutionFilter) -> Vec<String> {
        enumerate_solutions(n, f, &CountConfig::default())
            .unwrap()
            .map(|v| v.to_string())
            .collect()
    }

    #[test]
    fn nontrivial_for_eight() {
        let sols = list(8, SolutionFilter::NontrivialOnly);
        assert_eq!(sols.len(), 4);
        assert!(sols.contains(&"100110001".to_string()));
        assert_eq!(sols[0], "100110001");
    }

    #[test]
    fn four_has_no_nontrivial() {
        assert!(list(4, SolutionFilter::NontrivialOnly).is_empty());
        assert_eq!(list(4, SolutionFilter::All), vec!["10101", "01010"]);
    }

    #[test]
    fn fourteen_has_twelve_nontrivial() {
        assert_eq!(list(14, SolutionFilter::NontrivialOnly).len(), 12);
        assert_eq!(list(14, SolutionFilter::All).len(), 14);
    }

    #[test]
    fn order_is_strictly_decreasing() {
        let sols = list(13, SolutionFilter::All);
        assert_eq!(sols.len(), 144);
        assert!(sols.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn trivial_key_matches_classifier() {
        for n in [5usize, 8, 13, 14] {
            for v in enumerate_solutions(n, SolutionFilter::All, &CountConfig::default()).unwrap() {
                let key = v.lex_key().unwrap();
                let trivial = classify(&v).unwrap() != Classification::Nontrivial;
                assert_eq!(is_trivial_key(n, key), trivial, "{v}");
            }
        }
    }

    #[test]
    fn budget_refusal_is_explicit() {
        let cfg = CountConfig {
            memory_budget: 4096,
            ..CountConfig::default()
        };
        assert!(matches!(
            enumerate_solutions(24, SolutionFilter::All, &cfg),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            enumerate_solutions(64, SolutionFilter::All, &CountConfig::default()),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn key_helpers() {
        assert_eq!(full_mask(8), 0x1ff);
        assert_eq!(reverse_key(8, 0b100110001), 0b100011001);
        assert_eq!(full_mask(63), u64::MAX);
    }
}
