use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bigutil::{binomial, pow2, v2_big};
use crate::error::{Error, Result};

/// Largest exponent accepted by [`valuation_tableaux`].
pub const MAX_TABLEAUX_EXPONENT: u32 = 24;
/// Largest exponent accepted by [`rk_sum`].
pub const MAX_RK_EXPONENT: u32 = 16;

/// Number of borrows in the base-2 subtraction `big − k`, which by Kummer's
/// theorem is the exponent of 2 in `C(big, k)`.
pub fn v2_binomial(big: u64, k: u64) -> Result<u32> {
    if k > big {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds N = {big}")));
    }
    let (mut a, mut b) = (big, k);
    let mut borrow = 0u64;
    let mut count = 0;
    while a > 0 || b > 0 || borrow > 0 {
        let need = (b & 1) + borrow;
        borrow = u64::from((a & 1) < need);
        count += borrow as u32;
        a >>= 1;
        b >>= 1;
    }
    Ok(count)
}

/// The 2-adic valuations of row `2^exponent`, by level and merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationTableaux {
    pub exponent: u32,
    /// `merged[k] = v2(C(2^exponent, k))`.
    pub merged: Vec<u32>,
}

impl ValuationTableaux {
    pub fn size(&self) -> u64 {
        1 << self.exponent
    }

    /// Positions on level `level` of the tableau: the `k = (2t+1)·2^{e−level}`,
    /// all of which have valuation `level`. Level 0 holds the two endpoints.
    pub fn level(&self, level: u32) -> Vec<u64> {
        let e = self.exponent;
        if level == 0 {
            return vec![0, self.size()];
        }
        if level > e {
            return Vec::new();
        }
        let step = 1u64 << (e - level);
        (0..1u64 << (level - 1)).map(|t| (2 * t + 1) * step).collect()
    }

    /// Interleaving the levels reproduces the merged list.
    pub fn merge_levels(&self) -> Vec<u32> {
        let mut out = vec![u32::MAX; self.merged.len()];
        for level in 0..=self.exponent {
            for k in self.level(level) {
                out[k as usize] = level;
            }
        }
        out
    }
}

pub fn valuation_tableaux(exponent: u32) -> Result<ValuationTableaux> {
    if exponent == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    if exponent > MAX_TABLEAUX_EXPONENT {
        return Err(Error::ResourceLimit {
            what: "valuation tableaux entries".into(),
            needed: (1u128 << exponent) + 1,
            budget: (1u128 << MAX_TABLEAUX_EXPONENT) + 1,
        });
    }
    let big = 1u64 << exponent;
    let merged = (0..=big)
        .map(|k| v2_binomial(big, k))
        .collect::<Result<Vec<_>>>()?;
    let t = ValuationTableaux { exponent, merged };
    for k in 1..big {
        if t.merged[k as usize] + k.trailing_zeros() != exponent {
            return Err(Error::CheckFailed(format!(
                "v2(C(2^{exponent}, {k})) + v2({k}) != {exponent}"
            )));
        }
    }
    Ok(t)
}

/// `R_k = Σ_t C(2^e, (2t+1)·2^{e−k})`, the sum of level `k` of the tableau.
///
/// Checks `v2(R_k) = 2^k − 1`, `R_e = 2^{2^e−1}` and, for `e ≥ 3`,
/// `R_{e−1} = 2^{2^{e−1}−1}(2^{2^{e−1}−1} − 1)`.
pub fn rk_sum(exponent: u32, k: u32) -> Result<BigUint> {
    if exponent == 0 || k == 0 || k > exponent {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ exponent, got k = {k}, exponent = {exponent}"
        )));
    }
    if exponent > MAX_RK_EXPONENT {
        return Err(Error::ResourceLimit {
            what: "R_k row order".into(),
            needed: 1u128 << exponent,
            budget: 1u128 << MAX_RK_EXPONENT,
        });
    }
    let big = 1u64 << exponent;
    let step = 1u64 << (exponent - k);
    let mut sum = BigUint::zero();
    // walk the row once, keeping only the positions on level k
    let mut c = BigUint::from(1u8);
    for j in 1..=big / 2 {
        c = c * (big - j + 1) / j;
        if j % step == 0 && (j / step) % 2 == 1 {
            sum += &c;
            if j != big - j {
                sum += &c;
            }
        }
    }
    let expected_v2 = (1u64 << k) - 1;
    if v2_big(&sum) != Some(expected_v2) {
        return Err(Error::CheckFailed(format!(
            "v2(R_{k}) for exponent {exponent} is not {expected_v2}"
        )));
    }
    let half = 1u64 << (exponent - 1);
    let closed = if k == exponent {
        Some(pow2(big - 1))
    } else if k + 1 == exponent && exponent >= 3 {
        Some(pow2(half - 1) * (pow2(half - 1) - 1u8))
    } else {
        None
    };
    if let Some(closed) = closed {
        if closed != sum {
            return Err(Error::CheckFailed(format!(
                "R_{k} for exponent {exponent} disagrees with its closed form"
            )));
        }
    }
    debug_assert!(k != 1 || sum == binomial(big, big / 2));
    Ok(sum)
}
