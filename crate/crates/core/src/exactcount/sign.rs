use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::row::for_each_binomial;
use crate::bigutil::pow2;
use crate::{Error, Result};

/// A sign vector `δ ∈ {−1,+1}^{n+1}`; `bits[i]` is true iff `δ_i = +1`.
///
/// The text form is the bit string with index 0 leftmost, e.g. `100110001`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    bits: Vec<bool>,
}

impl SignVector {
    /// Builds a vector of order `n`; `bits` must have length `n + 1`.
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != n + 1 {
            return Err(Error::Malformed(format!(
                "order {n} needs {} bits, got {}",
                n + 1,
                bits.len()
            )));
        }
        Ok(SignVector { bits })
    }

    /// Parses a bit string and checks it against the expected order.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let v: SignVector = text.parse()?;
        if v.n() != n {
            return Err(Error::Malformed(format!(
                "order {n} needs {} bits, got {}",
                n + 1,
                v.bits.len()
            )));
        }
        Ok(v)
    }

    /// From `δ_i` values, each `+1` or `-1`.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::Malformed("empty sign vector".into()));
        }
        let bits = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(true),
                -1 => Ok(false),
                other => Err(Error::Malformed(format!("sign {other} is not ±1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector { bits })
    }

    /// The alternating vector `±[1,−1,1,…]`, starting with `+1` when `positive`.
    pub fn alternating(n: usize, positive: bool) -> Self {
        SignVector {
            bits: (0..=n).map(|i| (i % 2 == 0) == positive).collect(),
        }
    }

    /// Decodes a lexicographic key: bit `n − i` of `key` holds `bits[i]`.
    pub(crate) fn from_lex_key(n: usize, key: u64) -> Self {
        SignVector {
            bits: (0..=n).map(|i| key >> (n - i) & 1 == 1).collect(),
        }
    }

    #[cfg(test)]
    pub(crate) fn lex_key(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
    }

    pub fn n(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn sign(&self, i: usize) -> i8 {
        if self.bits[i] {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        self.bits.iter().map(|&b| if b { 1 } else { -1 })
    }

    /// `−δ`.
    pub fn negated(&self) -> Self {
        SignVector {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Reversal followed by complement: `δ'_i = −δ_{n−i}`.
    pub fn reverse_complement(&self) -> Self {
        SignVector {
            bits: self.bits.iter().rev().map(|b| !b).collect(),
        }
    }

    /// Complements both bits of the pair `(i, n−i)` when they differ.
    pub fn pair_complement(&self, i: usize) -> Option<Self> {
        let j = self.n() - i;
        if i == j || self.bits[i] == self.bits[j] {
            return None;
        }
        let mut bits = self.bits.clone();
        bits.swap(i, j);
        Some(SignVector { bits })
    }

    /// `Σ_{bit i = 1} C(n,i)`, the weight of the `+1` side.
    pub fn selected_sum(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for_each_binomial(self.n(), |i, c| {
            if self.bits[i] {
                acc += c;
            }
        });
        acc
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Malformed("empty bit string".into()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::Malformed(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector { bits })
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff the `+1` side of `v` sums to exactly `2^{n−1}`.
pub fn is_solution(v: &SignVector) -> bool {
    let n = v.n();
    n >= 1 && v.selected_sum() == pow2(n as u64 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    TrivialAlternating,
    TrivialAntisymmetric,
    Nontrivial,
}

impl Classification {
    pub fn is_trivial(self) -> bool {
        self != Classification::Nontrivial
    }
}

/// Label a known solution; non-solutions are rejected.
pub fn classify(v: &SignVector) -> Result<Classification> {
    if !is_solution(v) {
        return Err(Error::NotASolution { n: v.n() });
    }
    Ok(classify_unchecked(v))
}

pub(crate) fn classify_unchecked(v: &SignVector) -> Classification {
    let bits = v.bits();
    let n = v.n();
    if bits.windows(2).all(|w| w[0] != w[1]) {
        Classification::TrivialAlternating
    } else if n % 2 == 1 && (0..=n / 2).all(|i| bits[i] != bits[n - i]) {
        Classification::TrivialAntisymmetric
    } else {
        Classification::Nontrivial
    }
}

/// One solution in its JSON form `{n, bits, class}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: usize,
    pub bits: SignVector,
    pub class: Classification,
}

impl SolutionRecord {
    pub fn new(v: SignVector) -> Result<Self> {
        let class = classify(&v)?;
        Ok(SolutionRecord {
            n: v.n(),
            bits: v,
            class,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn appendix_vector_for_eight_is_a_solution() {
        assert!(is_solution(&v("100110001")));
        assert!(is_solution(&v("101010101")));
    }

    #[test]
    fn near_miss_is_rejected() {
        // 1 + 8 + 56 + 70 + 1 = 136
        let w = v("110110001");
        assert_eq!(w.selected_sum(), BigUint::from(136u32));
        assert!(!is_solution(&w));
        assert_eq!(classify(&w), Err(Error::NotASolution { n: 8 }));
    }

    #[test]
    fn length_mismatch_is_malformed() {
        assert!(matches!(SignVector::parse(8, "10011000"), Err(Error::Malformed(_))));
        assert!(matches!(SignVector::new(3, vec![true; 3]), Err(Error::Malformed(_))));
        assert!(matches!("10x1".parse::<SignVector>(), Err(Error::Malformed(_))));
        assert!(matches!(SignVector::from_signs(&[1, 0]), Err(Error::Malformed(_))));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&v("11110011001000")), Ok(Classification::Nontrivial));
        assert_eq!(classify(&v("110100")), Ok(Classification::TrivialAntisymmetric));
        assert_eq!(classify(&v("101010101")), Ok(Classification::TrivialAlternating));
        assert_eq!(classify(&v("010101")), Ok(Classification::TrivialAlternating));
        assert_eq!(classify(&v("100110001")), Ok(Classification::Nontrivial));
    }

    #[test]
    fn sign_view_matches_section_one_example() {
        let w = SignVector::from_signs(&[1, -1, -1, 1, 1, -1, -1, -1, 1]).unwrap();
        assert_eq!(w.to_string(), "100110001");
        assert_eq!(w.signs().collect::<Vec<_>>(), vec![1, -1, -1, 1, 1, -1, -1, -1, 1]);
    }

    #[test]
    fn symmetry_operations_preserve_solutions() {
        let w = v("100110001");
        assert!(is_solution(&w.negated()));
        assert!(is_solution(&w.reverse_complement()));
        let swapped = w.pair_complement(3).unwrap();
        assert_eq!(swapped.to_string(), "100011001");
        assert!(is_solution(&swapped));
        assert!(w.pair_complement(0).is_none());
        assert!(w.pair_complement(4).is_none());
    }

    #[test]
    fn lex_key_round_trip() {
        let w = v("100110001");
        let key = w.lex_key().unwrap();
        assert_eq!(key, 0b100110001);
        assert_eq!(SignVector::from_lex_key(8, key), w);
    }

    #[test]
    fn record_json_shape() {
        let rec = SolutionRecord::new(v("100110001")).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(json, r#"{"n":8,"bits":"100110001","class":"Nontrivial"}"#);
        let back: SolutionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn order_zero_has_no_solution() {
        assert!(!is_solution(&v("1")));
        assert!(!is_solution(&v("0")));
    }
}
