//! Splitting a count into independent shards by fixing a sign prefix.

use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::count::{check_order, count_with_prefix, CountConfig, CountResult, ShardInfo, Strategy};
use super::row::pascal_row;
use crate::{Error, Result};

/// Largest prefix length accepted; beyond it the shard list itself is too big.
pub const MAX_PREFIX_LEN: usize = 24;

/// Shard `shard_id` fixes `δ_0..δ_{prefix_len−1}` to the bits of `prefix_bits`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardDescriptor {
    pub n: usize,
    pub prefix_len: usize,
    pub shard_id: u64,
    pub prefix_bits: String,
}

impl ShardDescriptor {
    pub fn new(n: usize, prefix_len: usize, shard_id: u64) -> Result<Self> {
        validate(n, prefix_len)?;
        if shard_id >> prefix_len != 0 {
            return Err(Error::InvalidArgument(format!(
                "shard {shard_id} out of range for prefix length {prefix_len}"
            )));
        }
        let prefix_bits = (0..prefix_len)
            .map(|i| if shard_id >> (prefix_len - 1 - i) & 1 == 1 { '1' } else { '0' })
            .collect();
        Ok(ShardDescriptor {
            n,
            prefix_len,
            shard_id,
            prefix_bits,
        })
    }

    pub fn prefix(&self) -> Vec<bool> {
        self.prefix_bits.chars().map(|c| c == '1').collect()
    }
}

/// A counted shard: the shard manifest record `{n, prefix_len, shard_id, prefix_bits, total}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardResult {
    #[serde(flatten)]
    pub shard: ShardDescriptor,
    #[serde(with = "crate::decimal")]
    pub total: BigUint,
}

fn validate(n: usize, prefix_len: usize) -> Result<()> {
    check_order(n)?;
    if prefix_len == 0 || prefix_len > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "prefix length must lie in 1..={}, got {prefix_len}",
            n + 1
        )));
    }
    if prefix_len > MAX_PREFIX_LEN {
        return Err(Error::ResourceLimit {
            what: format!("2^{prefix_len} shard descriptors"),
            needed: 1u128 << prefix_len,
            budget: 1u128 << MAX_PREFIX_LEN,
        });
    }
    Ok(())
}

/// The `2^prefix_len` disjoint shards that together cover row `n`.
pub fn prefix_partition(n: usize, prefix_len: usize) -> Result<Vec<ShardDescriptor>> {
    validate(n, prefix_len)?;
    (0..1u64 << prefix_len)
        .map(|id| ShardDescriptor::new(n, prefix_len, id))
        .collect()
}

pub fn count_shard(shard: &ShardDescriptor, config: &CountConfig) -> Result<ShardResult> {
    let row = pascal_row(shard.n);
    let total = count_with_prefix(&row, &shard.prefix(), config)?;
    Ok(ShardResult {
        shard: shard.clone(),
        total,
    })
}

/// Sums shard totals after checking they form one complete partition.
pub fn merge_shards(results: &[ShardResult]) -> Result<BigUint> {
    let first = results
        .first()
        .ok_or_else(|| Error::InvalidArgument("no shard results to merge".into()))?;
    let (n, prefix_len) = (first.shard.n, first.shard.prefix_len);
    let expected = 1usize << prefix_len;
    let mut seen = vec![false; expected];
    for r in results {
        if r.shard.n != n || r.shard.prefix_len != prefix_len {
            return Err(Error::InvalidArgument(
                "shard results come from different partitions".into(),
            ));
        }
        let id = r.shard.shard_id as usize;
        if id >= expected || std::mem::replace(&mut seen[id], true) {
            return Err(Error::InvalidArgument(format!("shard {id} is duplicated or out of range")));
        }
    }
    if results.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "partition has {expected} shards, got {}",
            results.len()
        )));
    }
    Ok(results.iter().map(|r| &r.total).sum())
}

/// Counts every shard on a pool of `config.threads` workers and merges them.
pub fn count_sharded(n: usize, prefix_len: usize, config: &CountConfig) -> Result<CountResult> {
    let start = Instant::now();
    let shards = prefix_partition(n, prefix_len)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<ShardResult> = pool.install(|| {
        shards
            .par_iter()
            .map(|s| count_shard(s, config))
            .collect::<Result<Vec<_>>>()
    })?;
    let total = merge_shards(&results)?;
    let mut out = CountResult::from_total(n, total, Strategy::MeetInMiddle, start.elapsed())?;
    out.shards = Some(ShardInfo {
        prefix_len,
        shard_count: shards.len() as u64,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totals(n: usize, p: usize) -> Vec<u64> {
        prefix_partition(n, p)
            .unwrap()
            .iter()
            .map(|s| u64::try_from(&count_shard(s, &CountConfig::default()).unwrap().total).unwrap())
            .collect()
    }

    #[test]
    fn eight_with_two_prefix_bits() {
        let t = totals(8, 2);
        assert_eq!(t.len(), 4);
        assert_eq!(t.iter().sum::<u64>(), 6);
    }

    #[test]
    fn thirteen_splits_evenly() {
        assert_eq!(totals(13, 1), vec![72, 72]);
    }

    #[test]
    fn full_length_prefix_counts_single_vectors() {
        assert_eq!(totals(4, 5).iter().sum::<u64>(), 2);
    }

    #[test]
    fn invalid_prefix_lengths() {
        assert!(matches!(prefix_partition(8, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(prefix_partition(8, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(prefix_partition(40, 30), Err(Error::ResourceLimit { .. })));
        assert!(ShardDescriptor::new(8, 2, 4).is_err());
    }

    #[test]
    fn descriptor_prefix_bits() {
        let s = ShardDescriptor::new(8, 3, 0b110).unwrap();
        assert_eq!(s.prefix_bits, "110");
        assert_eq!(s.prefix(), vec![true, true, false]);
    }

    #[test]
    fn merge_rejects_incomplete_or_duplicate() {
        let cfg = CountConfig::default();
        let rs: Vec<ShardResult> = prefix_partition(8, 2)
            .unwrap()
            .iter()
            .map(|s| count_shard(s, &cfg).unwrap())
            .collect();
        assert_eq!(merge_shards(&rs).unwrap(), BigUint::from(6u32));
        assert!(merge_shards(&rs[..3]).is_err());
        let mut dup = rs.clone();
        dup[3] = dup[0].clone();
        assert!(merge_shards(&dup).is_err());
        assert!(merge_shards(&[]).is_err());
    }

    #[test]
    fn manifest_json() {
        let r = ShardResult {
            shard: ShardDescriptor::new(13, 1, 1).unwrap(),
            total: BigUint::from(72u32),
        };
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"n":13,"prefix_len":1,"shard_id":1,"prefix_bits":"1","total":"72"}"#);
        assert_eq!(serde_json::from_str::<ShardResult>(&json).unwrap(), r);
    }

    #[test]
    fn sharded_count_matches_and_records_provenance() {
        let cfg = CountConfig {
            threads: Some(2),
            ..CountConfig::default()
        };
        let r = count_sharded(14, 3, &cfg).unwrap();
        assert_eq!(r.total, BigUint::from(14u32));
        assert_eq!(r.shards, Some(ShardInfo { prefix_len: 3, shard_count: 8 }));
    }
}
