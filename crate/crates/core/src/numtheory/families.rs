use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::pell::fibonacci_pair;
use crate::bigutil::binomial;
use crate::error::{Error, Result};
use crate::exactcount::{classify, Classification, SignVector};

/// Largest order for which witnesses are built and verified.
pub const MAX_WITNESS_N: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `C(n,k) = 2C(n,k−1)` for `n ≡ 2 (mod 6)`, `k = (n+1)/3`.
    SectionOneShift,
    /// `C(n,x) + C(n,x+2) = 2C(n,x+1)`, `n = k² − 2`.
    TwoTermAvg,
    /// `C(n,x) + C(n,x+3) = C(n,x+1) + C(n,x+2)`, `n = k² − 3`.
    FourTermSwap,
    /// `C(n,x+2) = C(n,x+1) + C(n,x)` from the Pell equation.
    FibonacciPell,
    /// Paired `1001` blocks around the middle, `n = 4k² + 16k + 13`.
    BlockInsert,
}

/// The families whose orders make up the published list of `n`.
pub const THEOREM_FAMILIES: [Family; 4] = [
    Family::TwoTermAvg,
    Family::FourTermSwap,
    Family::FibonacciPell,
    Family::BlockInsert,
];

impl Family {
    /// Smallest valid parameter.
    pub fn min_parameter(self) -> u64 {
        match self {
            Family::SectionOneShift => 2,
            Family::TwoTermAvg | Family::FourTermSwap => 4,
            Family::FibonacciPell => 1,
            Family::BlockInsert => 0,
        }
    }

    pub fn all() -> [Family; 5] {
        [
            Family::SectionOneShift,
            Family::TwoTermAvg,
            Family::FourTermSwap,
            Family::FibonacciPell,
            Family::BlockInsert,
        ]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::all()
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

/// An exactly verified family instance with the bisection it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub family: Family,
    pub k: u64,
    pub n: usize,
    pub x: usize,
    /// Row indices whose signs differ from the trivial base vector.
    pub positions: Vec<usize>,
    #[serde(with = "crate::decimal")]
    pub lhs: BigUint,
    #[serde(with = "crate::decimal")]
    pub rhs: BigUint,
    #[serde(rename = "bisection_bits")]
    pub sample_bisection: SignVector,
}

/// The order `n` produced by the family's closed form; may be negative or
/// unusable, and is not verified.
pub fn family_order(family: Family, k: u64) -> BigInt {
    let k = BigInt::from(k);
    match family {
        Family::SectionOneShift => k,
        Family::TwoTermAvg => &k * &k - 2,
        Family::FourTermSwap => &k * &k - 3,
        Family::FibonacciPell => {
            let (f4k, f4k1) = fib_4k(&k);
            (f4k1 + f4k * 2 - 6) / 5
        }
        Family::BlockInsert => (&k * &k * 2 + &k * 8 + 6) * 2 + 1,
    }
}

fn fib_4k(k: &BigInt) -> (BigInt, BigInt) {
    let (a, b) = fibonacci_pair(4 * k.to_u64().unwrap_or(0));
    (BigInt::from(a), BigInt::from(b))
}

fn c(n: usize, j: usize) -> BigUint {
    binomial(n as u64, j as u64)
}

fn check_identity(lhs: &BigUint, rhs: &BigUint, what: impl FnOnce() -> String) -> Result<()> {
    if lhs != rhs {
        return Err(Error::IdentityFailed(what()));
    }
    Ok(())
}

fn small(v: &BigInt) -> Option<usize> {
    if v.is_negative() {
        return None;
    }
    v.to_usize()
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_WITNESS_N {
        return Err(Error::ResourceLimit {
            what: "witness order".into(),
            needed: n as u128,
            budget: MAX_WITNESS_N as u128,
        });
    }
    Ok(())
}

/// Builds and verifies the family instance for parameter `k`, or `None`
/// when the closed form gives no nontrivial bisection.
///
/// For [`Family::SectionOneShift`] the parameter is `n` itself.
pub fn family_witness(family: Family, k: u64) -> Result<Option<FamilyWitness>> {
    if k < family.min_parameter() {
        return Err(Error::InvalidArgument(format!(
            "{family} needs a parameter of at least {}, got {k}",
            family.min_parameter()
        )));
    }
    let built = match family {
        Family::SectionOneShift => section_one_shift(k)?,
        Family::TwoTermAvg => two_term_avg(k)?,
        Family::FourTermSwap => four_term_swap(k)?,
        Family::FibonacciPell => fibonacci_pell(k)?,
        Family::BlockInsert => block_insert(k)?,
    };
    let Some(w) = built else {
        return Ok(None);
    };
    match classify(&w.sample_bisection) {
        Ok(Classification::Nontrivial) => Ok(Some(w)),
        Ok(_) => Ok(None),
        Err(_) => Err(Error::IdentityFailed(format!(
            "{family} with k = {k} produced a vector that is not a bisection"
        ))),
    }
}

fn flip(v: &SignVector, positions: &[usize]) -> SignVector {
    let mut bits = v.bits().to_vec();
    for &p in positions {
        bits[p] = !bits[p];
    }
    SignVector::new(v.n(), bits).expect("length is unchanged")
}

/// The odd-order trivial bisection whose first half is all ones.
fn half_ones(n: usize) -> Vec<bool> {
    (0..=n).map(|i| i <= n / 2).collect()
}

fn section_one_shift(n: u64) -> Result<Option<FamilyWitness>> {
    if n % 6 != 2 {
        return Err(Error::InvalidArgument(format!("SectionOneShift needs n ≡ 2 (mod 6), got {n}")));
    }
    let n = n as usize;
    check_size(n)?;
    let kk = (n + 1) / 3;
    let (lhs, rhs) = (c(n, kk), c(n, kk - 1) * 2u8);
    check_identity(&lhs, &rhs, || format!("C({n},{kk}) = 2C({n},{})", kk - 1))?;
    check_identity(&c(n, kk - 1), &c(n, n - kk + 1), || format!("symmetry of row {n}"))?;
    // base vector with bit kk clear, so kk − 1 and n − kk + 1 are set
    let base = SignVector::alternating(n, kk % 2 == 1);
    let positions = vec![kk - 1, kk, n - kk + 1];
    Ok(Some(FamilyWitness {
        family: Family::SectionOneShift,
        k: n as u64,
        n,
        x: kk,
        sample_bisection: flip(&base, &positions),
        positions,
        lhs,
        rhs,
    }))
}

fn two_term_avg(k: u64) -> Result<Option<FamilyWitness>> {
    if k % 2 == 1 {
        return Ok(None);
    }
    let n = (k * k - 2) as usize;
    check_size(n)?;
    let x = ((k * k - k) / 2 - 2) as usize;
    let (lhs, rhs) = (c(n, x) + c(n, x + 2), c(n, x + 1) * 2u8);
    check_identity(&lhs, &rhs, || format!("C({n},{x}) + C({n},{}) = 2C({n},{})", x + 2, x + 1))?;
    // x, x + 2 share a parity opposite to that of x + 1 and n − x − 1
    let base = SignVector::alternating(n, x % 2 == 0);
    let positions = vec![x, x + 1, x + 2, n - x - 1];
    Ok(Some(FamilyWitness {
        family: Family::TwoTermAvg,
        k,
        n,
        x,
        sample_bisection: flip(&base, &positions),
        positions,
        lhs,
        rhs,
    }))
}

/// Overwrites `x..x+3` and its mirror block with `1001` on the half-ones base.
fn paired_blocks(n: usize, x: usize) -> (Vec<usize>, SignVector) {
    let mut bits = half_ones(n);
    let before = bits.clone();
    for (i, b) in [true, false, false, true].into_iter().enumerate() {
        bits[x + i] = b;
        bits[n - x - 3 + i] = b;
    }
    let positions = (0..=n).filter(|&i| bits[i] != before[i]).collect();
    (positions, SignVector::new(n, bits).expect("length is n + 1"))
}

fn four_term(n: usize, x: usize) -> (BigUint, BigUint) {
    (c(n, x) + c(n, x + 3), c(n, x + 1) + c(n, x + 2))
}

fn four_term_swap(k: u64) -> Result<Option<FamilyWitness>> {
    if k % 2 == 1 {
        return Ok(None);
    }
    let n = (k * k - 3) as usize;
    check_size(n)?;
    let x = ((k * k - k) / 2 - 3) as usize;
    if x + 3 > n / 2 {
        return Ok(None);
    }
    let (lhs, rhs) = four_term(n, x);
    check_identity(&lhs, &rhs, || {
        format!("C({n},{x}) + C({n},{}) = C({n},{}) + C({n},{})", x + 3, x + 1, x + 2)
    })?;
    let (positions, sample_bisection) = paired_blocks(n, x);
    Ok(Some(FamilyWitness {
        family: Family::FourTermSwap,
        k,
        n,
        x,
        positions,
        lhs,
        rhs,
        sample_bisection,
    }))
}

fn block_insert(k: u64) -> Result<Option<FamilyWitness>> {
    let t = (2 * k * k + 8 * k + 6) as usize;
    let n = 2 * t + 1;
    check_size(n)?;
    let k = k as usize;
    let x = t - k - 3;
    let lhs = c(n, t - k - 3) + c(n, t - k) + c(n, t + k + 1) + c(n, t + k + 4);
    let rhs = c(n, t - k - 1) + c(n, t - k - 2) + c(n, t + k + 2) + c(n, t + k + 3);
    check_identity(&lhs, &rhs, || format!("paired block identity for n = {n}, k = {k}"))?;
    let (half_l, half_r) = four_term(n, x);
    check_identity(&half_l, &half_r, || format!("half block identity for n = {n}, k = {k}"))?;
    let (positions, sample_bisection) = paired_blocks(n, x);
    Ok(Some(FamilyWitness {
        family: Family::BlockInsert,
        k: k as u64,
        n,
        x,
        positions,
        lhs,
        rhs,
        sample_bisection,
    }))
}

/// The two `x` formulas for the Pell family: the general solution
/// `(3F_{4k} − F_{4k+1} − 9)/5` and the specialised `(4F_{4k+1} + 3F_{4k} − 9)/5`.
pub fn fibonacci_pell_x_candidates(k: u64) -> [Option<BigInt>; 2] {
    let (f4k, f4k1) = fib_4k(&BigInt::from(k));
    let exact_div = |v: BigInt| {
        let (q, r) = v.div_rem(&BigInt::from(5));
        r.is_zero().then_some(q)
    };
    [
        exact_div(&f4k * 3 - &f4k1 - 9),
        exact_div(&f4k1 * 4 + &f4k * 3 - 9),
    ]
}

fn fibonacci_pell(k: u64) -> Result<Option<FamilyWitness>> {
    let (f4k, f4k1) = fib_4k(&BigInt::from(k));
    let total: BigInt = &f4k1 + &f4k * 2 - 6;
    let (n, r) = total.div_rem(&BigInt::from(5));
    if !r.is_zero() {
        return Ok(None);
    }
    let Some(n) = small(&n) else {
        return Ok(None);
    };
    // only odd orders leave room for a nontrivial swap
    if n % 2 == 0 {
        return Ok(None);
    }
    check_size(n)?;
    let in_range: Vec<usize> = fibonacci_pell_x_candidates(k)
        .into_iter()
        .flatten()
        .filter_map(|x| small(&x))
        .filter(|&x| x + 2 <= n / 2)
        .collect();
    if in_range.is_empty() {
        return Ok(None);
    }
    for x in in_range {
        let (lhs, rhs) = (c(n, x + 2), c(n, x + 1) + c(n, x));
        if lhs != rhs {
            continue;
        }
        let mut bits = half_ones(n);
        bits[x] = false;
        bits[x + 1] = false;
        bits[n - x - 2] = true;
        let positions = vec![x, x + 1, n - x - 2];
        return Ok(Some(FamilyWitness {
            family: Family::FibonacciPell,
            k,
            n,
            x,
            positions,
            lhs,
            rhs,
            sample_bisection: SignVector::new(n, bits).expect("length is n + 1"),
        }));
    }
    Err(Error::IdentityFailed(format!(
        "no x candidate satisfies C({n},x+2) = C({n},x+1) + C({n},x) for k = {k}"
    )))
}

/// Verified witnesses of the given families with order at most `limit`,
/// ordered by family and then parameter.
pub fn family_witnesses(families: &[Family], limit: usize) -> Result<Vec<FamilyWitness>> {
    let mut out = Vec::new();
    for &family in families {
        let mut k = family.min_parameter();
        loop {
            let order = family_order(family, k);
            if order > BigInt::from(limit) {
                break;
            }
            let applicable = family != Family::SectionOneShift || k % 6 == 2;
            if applicable && order.is_positive() {
                if let Some(w) = family_witness(family, k)? {
                    out.push(w);
                }
            }
            k += 1;
        }
    }
    Ok(out)
}

/// Sorted, deduplicated orders `n ≤ limit` from the theorem families.
pub fn family_n_list(limit: usize) -> Result<Vec<usize>> {
    if limit < 13 {
        return Err(Error::InvalidArgument(format!("limit must be at least 13, got {limit}")));
    }
    let mut ns: Vec<usize> = family_witnesses(&THEOREM_FAMILIES, limit)?
        .into_iter()
        .map(|w| w.n)
        .collect();
    ns.sort_unstable();
    ns.dedup();
    Ok(ns)
}
