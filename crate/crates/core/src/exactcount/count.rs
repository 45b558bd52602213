use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::mitm::{self, SumKey};
use super::row::{pascal_row, PascalRow};
use crate::bigutil::pow2;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    BruteForce,
    MeetInMiddle,
}

/// Limits shared by counting and enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest `n` accepted by [`Strategy::BruteForce`].
    pub brute_force_cap: usize,
    /// Upper bound on the estimated bytes held by a meet-in-the-middle join.
    pub memory_budget: u64,
    /// Worker threads for sharded work; `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            brute_force_cap: 24,
            memory_budget: 8 << 30,
            threads: None,
        }
    }
}

/// Where a sharded count came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardInfo {
    pub prefix_len: usize,
    pub shard_count: u64,
}

/// Exact `J_n` with its trivial/nontrivial split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub n: usize,
    #[serde(with = "crate::decimal")]
    pub total: BigUint,
    #[serde(with = "crate::decimal")]
    pub trivial: BigUint,
    #[serde(with = "crate::decimal")]
    pub nontrivial: BigUint,
    pub strategy: Strategy,
    #[serde(rename = "elapsed_ms", with = "millis")]
    pub elapsed: Duration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shards: Option<ShardInfo>,
}

impl CountResult {
    pub(crate) fn from_total(
        n: usize,
        total: BigUint,
        strategy: Strategy,
        elapsed: Duration,
    ) -> Result<Self> {
        let trivial = trivial_count(n);
        if total < trivial || total.bit(0) {
            return Err(Error::CheckFailed(format!(
                "J_{n} = {total} is odd or below the trivial count {trivial}"
            )));
        }
        let nontrivial = &total - &trivial;
        Ok(CountResult {
            n,
            total,
            trivial,
            nontrivial,
            strategy,
            elapsed,
            shards: None,
        })
    }

    /// Equality of the counted values, ignoring timing and provenance.
    pub fn same_counts(&self, other: &CountResult) -> bool {
        self.n == other.n
            && self.total == other.total
            && self.trivial == other.trivial
            && self.nontrivial == other.nontrivial
    }
}

/// `2^{(n+1)/2}` for odd `n`, `2` for even `n`.
pub fn trivial_count(n: usize) -> BigUint {
    if n % 2 == 1 {
        pow2((n as u64 + 1) / 2)
    } else {
        BigUint::from(2u32)
    }
}

/// Counts every `δ` with `Σ δ_i C(n,i) = 0`.
pub fn count_bisections(n: usize, strategy: Strategy, config: &CountConfig) -> Result<CountResult> {
    check_order(n)?;
    let start = Instant::now();
    let row = pascal_row(n);
    let total = match strategy {
        Strategy::BruteForce => {
            if n > config.brute_force_cap || n > 62 {
                return Err(Error::BruteForceCap {
                    n,
                    cap: config.brute_force_cap.min(62),
                });
            }
            BigUint::from(brute_force_count(&row))
        }
        // Negation is a fixed-point-free involution on solutions, so count the
        // half with δ_0 = +1 and double it.
        Strategy::MeetInMiddle => count_with_prefix(&row, &[true], config)? << 1u32,
    };
    CountResult::from_total(n, total, strategy, start.elapsed())
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "n must be at least 1 (row 0 has no bisection)".into(),
        ));
    }
    Ok(())
}

/// Exhaustive Gray-code walk over all `2^{n+1}` subsets.
pub(crate) fn brute_force_count(row: &PascalRow) -> u64 {
    let w = row.as_u64().expect("brute force is limited to n ≤ 62");
    let target = 1u64 << (row.n() - 1);
    let mut sum = 0u64;
    let mut mask = 0u64;
    let mut hits = u64::from(target == 0);
    for step in 1u64..(1u64 << w.len()) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask >> bit & 1 == 1 {
            sum += w[bit];
        } else {
            sum -= w[bit];
        }
        if sum == target {
            hits += 1;
        }
    }
    hits
}

/// Bytes a join over `free` weights of a row `n` would hold.
pub(crate) fn join_bytes(n: usize, free: usize, entry_extra: u64) -> u128 {
    let per = if n <= 63 {
        u64::approx_bytes(0)
    } else {
        BigUint::approx_bytes(n as u64 + 1)
    } + entry_extra;
    // the merge that produces each table briefly holds it twice
    mitm::table_entries(free) * per as u128 * 3 / 2
}

pub(crate) fn check_budget(what: &str, needed: u128, config: &CountConfig) -> Result<()> {
    if needed > config.memory_budget as u128 {
        return Err(Error::ResourceLimit {
            what: format!("{what} (bytes)"),
            needed,
            budget: config.memory_budget as u128,
        });
    }
    Ok(())
}

/// Number of solutions whose first `prefix.len()` signs are fixed.
pub(crate) fn count_with_prefix(
    row: &PascalRow,
    prefix: &[bool],
    config: &CountConfig,
) -> Result<BigUint> {
    let n = row.n();
    let p = prefix.len();
    if p == 0 || p > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "prefix length {p} outside 1..={}",
            n + 1
        )));
    }
    check_budget("subset-sum tables", join_bytes(n, n + 1 - p, 0), config)?;
    let target = row.target().expect("n ≥ 1");
    let fixed: BigUint = (0..p).filter(|&i| prefix[i]).map(|i| row.coeff(i)).sum();
    if fixed > target {
        return Ok(BigUint::default());
    }
    let rest = target - fixed;
    let count = match row.as_u64() {
        Some(w) => {
            let rest = u64::try_from(&rest).expect("fits with the row");
            mitm::count_subsets(&w[p..], &rest)
        }
        None => mitm::count_subsets(&row.coeffs()[p..], &rest),
    };
    Ok(BigUint::from(count))
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(v.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(n: usize, s: Strategy) -> u64 {
        let r = count_bisections(n, s, &CountConfig::default()).unwrap();
        u64::try_from(&r.total).unwrap()
    }

    #[test]
    fn small_table_values() {
        assert_eq!(total(1, Strategy::MeetInMiddle), 2);
        assert_eq!(total(8, Strategy::MeetInMiddle), 6);
        assert_eq!(total(13, Strategy::MeetInMiddle), 144);
        assert_eq!(total(16, Strategy::MeetInMiddle), 2);
        assert_eq!(total(8, Strategy::BruteForce), 6);
        assert_eq!(total(13, Strategy::BruteForce), 144);
    }

    #[test]
    fn breakdown_for_thirteen() {
        let r = count_bisections(13, Strategy::MeetInMiddle, &CountConfig::default()).unwrap();
        assert_eq!(r.trivial, BigUint::from(128u32));
        assert_eq!(r.nontrivial, BigUint::from(16u32));
    }

    #[test]
    fn brute_force_cap_is_enforced() {
        let cfg = CountConfig {
            brute_force_cap: 10,
            ..CountConfig::default()
        };
        assert_eq!(
            count_bisections(11, Strategy::BruteForce, &cfg),
            Err(Error::BruteForceCap { n: 11, cap: 10 })
        );
    }

    #[test]
    fn order_zero_is_rejected() {
        let cfg = CountConfig::default();
        assert!(matches!(
            count_bisections(0, Strategy::MeetInMiddle, &cfg),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn memory_budget_refuses_up_front() {
        let cfg = CountConfig {
            memory_budget: 1 << 10,
            ..CountConfig::default()
        };
        assert!(matches!(
            count_bisections(30, Strategy::MeetInMiddle, &cfg),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn big_key_path_agrees() {
        let row = pascal_row(14);
        let target = row.target().unwrap() - row.coeff(0);
        let big = mitm::count_subsets(&row.coeffs()[1..], &target);
        assert_eq!(BigUint::from(big) << 1u32, BigUint::from(14u32));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let r = CountResult::from_total(8, BigUint::from(6u32), Strategy::MeetInMiddle, Duration::from_millis(7))
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"n":8,"total":"6","trivial":"2","nontrivial":"4","strategy":"MeetInMiddle","elapsed_ms":7}"#
        );
        let back: CountResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn inconsistent_totals_are_rejected() {
        let odd = CountResult::from_total(8, BigUint::from(7u32), Strategy::BruteForce, Duration::ZERO);
        assert!(matches!(odd, Err(Error::CheckFailed(_))));
        let low = CountResult::from_total(13, BigUint::from(64u32), Strategy::BruteForce, Duration::ZERO);
        assert!(matches!(low, Err(Error::CheckFailed(_))));
    }
}
