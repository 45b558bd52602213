use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::count::CountConfig;
use super::enumerate::{full_mask, reverse_key, solution_keys, SolutionFilter};
use super::sign::SignVector;
use crate::{Error, Result};

/// One orbit of nontrivial solutions under pair-complement and reverse-complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    /// Lexicographically greatest member.
    pub representative: SignVector,
    pub orbit_size: u64,
}

/// Sets the earlier bit of every differing mirror pair; returns the key and the
/// number of differing pairs.
fn normalize_pairs(n: usize, key: u64) -> (u64, u32) {
    let mut out = key;
    let mut differing = 0;
    let mut i = 0;
    while i < n - i {
        let hi = n - i; // δ_i
        let lo = i; // δ_{n−i}
        if (key >> hi & 1) != (key >> lo & 1) {
            out |= 1 << hi;
            out &= !(1 << lo);
            differing += 1;
        }
        i += 1;
    }
    (out, differing)
}

/// Representative and size of the orbit containing `key`.
pub(crate) fn orbit_of(n: usize, key: u64) -> (u64, u64) {
    let (a, d) = normalize_pairs(n, key);
    let rc = reverse_key(n, full_mask(n) ^ key);
    let (b, _) = normalize_pairs(n, rc);
    let size = 1u64 << d;
    if a == b {
        (a, size)
    } else {
        (a.max(b), size * 2)
    }
}

/// Partitions the nontrivial solutions of row `n` into symmetry orbits,
/// largest representative first.
pub fn canonical_orbits(n: usize, config: &CountConfig) -> Result<Vec<OrbitSummary>> {
    let keys = solution_keys(n, SolutionFilter::NontrivialOnly, config)?;
    let mut orbits: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for key in keys {
        let (rep, size) = orbit_of(n, key);
        let entry = orbits.entry(rep).or_insert((size, 0));
        entry.1 += 1;
    }
    let mut out = Vec::with_capacity(orbits.len());
    for (rep, (size, seen)) in orbits.into_iter().rev() {
        if size != seen {
            return Err(Error::CheckFailed(format!(
                "row {n}: orbit of {rep:#b} has {size} members but {seen} were enumerated"
            )));
        }
        out.push(OrbitSummary {
            representative: SignVector::from_lex_key(n, rep),
            orbit_size: size,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbits(n: usize) -> Vec<(String, u64)> {
        canonical_orbits(n, &CountConfig::default())
            .unwrap()
            .into_iter()
            .map(|o| (o.representative.to_string(), o.orbit_size))
            .collect()
    }

    #[test]
    fn eight() {
        assert_eq!(orbits(8), vec![("100110001".to_string(), 4)]);
    }

    #[test]
    fn fourteen() {
        assert_eq!(
            orbits(14),
            vec![
                ("101011100100101".to_string(), 8),
                ("101001101000101".to_string(), 4),
            ]
        );
    }

    #[test]
    fn twenty() {
        assert_eq!(orbits(20), vec![("101010011010100010101".to_string(), 4)]);
    }

    #[test]
    fn trivial_rows_have_no_orbits() {
        assert!(orbits(4).is_empty());
        assert!(orbits(11).is_empty());
    }

    #[test]
    fn normalization_prefers_leading_ones() {
        // pair (3,5) differs in 100011001 → promote index 3
        assert_eq!(normalize_pairs(8, 0b100011001), (0b100110001, 1));
    }
}
