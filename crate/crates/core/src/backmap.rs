//! The backward map `Θ: δ ↦ η`, `η_j = (δ_j + δ_{j+1})/2`, from bisections of
//! row `n` to ternary identities `Σ η_i C(n−1, i) = 0`, together with its
//! range condition and inverse.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcount::{
    enumerate_solutions, for_each_binomial, is_solution, CountConfig, SignVector, SolutionFilter,
};
use crate::numtheory::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TernaryVector {
    pub m: usize,
    pub entries: Vec<i8>,
}

impl TernaryVector {
    /// A vector of order `entries.len() − 1`; entries must be in `{−1, 0, 1}`.
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Malformed("empty ternary vector".into()));
        }
        if let Some(bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::Malformed(format!("entry {bad} is not in {{−1, 0, 1}}")));
        }
        Ok(TernaryVector {
            m: entries.len() - 1,
            entries,
        })
    }

    pub fn zero(m: usize) -> Self {
        TernaryVector {
            m,
            entries: vec![0; m + 1],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `Σ η_i C(m, i)`.
    pub fn weighted_sum(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for_each_binomial(self.m, |i, c| match self.entries[i] {
            1 => acc += BigInt::from(c.clone()),
            -1 => acc -= BigInt::from(c.clone()),
            _ => {}
        });
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.weighted_sum().is_zero()
    }

    pub fn negated(&self) -> Self {
        TernaryVector {
            m: self.m,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl From<&SignVector> for TernaryVector {
    fn from(v: &SignVector) -> Self {
        TernaryVector {
            m: v.n(),
            entries: v.signs().collect(),
        }
    }
}

/// `Θ(δ)` for a bisection `δ` of order `n ≥ 1`.
pub fn theta(v: &SignVector) -> Result<TernaryVector> {
    if !is_solution(v) {
        return Err(Error::NotASolution { n: v.n() });
    }
    let signs: Vec<i8> = v.signs().collect();
    let t = TernaryVector {
        m: v.n() - 1,
        entries: signs.windows(2).map(|w| (w[0] + w[1]) / 2).collect(),
    };
    if !t.is_identity() {
        return Err(Error::CheckFailed(format!("Θ image of order {} is not an identity", t.m)));
    }
    Ok(t)
}

/// Whether the pattern of nonzero entries can be lifted: between consecutive
/// nonzero entries of opposite sign the number of zeros is odd, and between
/// entries of equal sign it is even. Leading and trailing zeros are free.
pub fn ivp_pattern(entries: &[i8]) -> bool {
    let mut last: Option<(usize, i8)> = None;
    for (j, &e) in entries.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if let Some((i, s)) = last {
            let zeros = j - i - 1;
            if (zeros % 2 == 1) != (s != e) {
                return false;
            }
        }
        last = Some((j, e));
    }
    true
}

/// The IVP property of an identity vector; non-identities are rejected.
pub fn has_ivp(t: &TernaryVector) -> Result<bool> {
    if !t.is_identity() {
        return Err(Error::NotAnIdentity { m: t.m });
    }
    Ok(ivp_pattern(&t.entries))
}

/// The unique `δ` with `Θ(δ) = t` and `δ_0 = first_sign`.
pub fn lift(t: &TernaryVector, first_sign: i8) -> Result<SignVector> {
    if first_sign != 1 && first_sign != -1 {
        return Err(Error::InvalidArgument(format!("first sign must be ±1, got {first_sign}")));
    }
    if !has_ivp(t)? {
        return Err(Error::IvpViolation);
    }
    let mut signs = Vec::with_capacity(t.m + 2);
    signs.push(first_sign);
    for &e in &t.entries {
        let cur = *signs.last().expect("nonempty");
        if e == 0 {
            signs.push(-cur);
        } else if e == cur {
            signs.push(e);
        } else {
            return Err(Error::InconsistentSign);
        }
    }
    let v = SignVector::from_signs(&signs)?;
    if !is_solution(&v) {
        return Err(Error::CheckFailed(format!("lift of order {} is not a bisection", v.n())));
    }
    Ok(v)
}

/// The two identities `(±δ − τ)/2` of order `n` carried by a bisection `δ`,
/// where `τ` is the alternating solution starting with `+1`. Both are zero
/// exactly when `δ = τ` or `−δ = τ`.
pub fn associated_identities(v: &SignVector) -> Result<[TernaryVector; 2]> {
    if !is_solution(v) {
        return Err(Error::NotASolution { n: v.n() });
    }
    let n = v.n();
    let tau = SignVector::alternating(n, true);
    let make = |w: &SignVector| {
        let entries = w.signs().zip(tau.signs()).map(|(a, b)| (a - b) / 2).collect();
        TernaryVector { m: n, entries }
    };
    let pair = [make(v), make(&v.negated())];
    for t in &pair {
        if !t.is_identity() {
            return Err(Error::CheckFailed(format!("associated vector of order {n} is not an identity")));
        }
    }
    Ok(pair)
}

/// Outcome of checking that no nontrivial bisection of order `p − 2` has IVP.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub p: u64,
    pub n: usize,
    /// Nontrivial bisections of order `p − 2` examined.
    pub nontrivial_examined: u64,
    /// Nonzero associated identities of those bisections that have IVP,
    /// and so would lift to a nontrivial bisection of order `p − 1`.
    pub with_ivp: u64,
    /// How many `Θ(δ)` (order `p − 3`) are nonzero; each is in the range
    /// of `Θ` and so has IVP.
    pub nonzero_theta_images: u64,
}

impl CorollaryReport {
    pub fn holds(&self) -> bool {
        self.with_ivp == 0
    }
}

/// Checks that no nontrivial `δ ∈ J_{p−2}` has an associated identity with
/// IVP.
pub fn prime_corollary_check(p: u64, config: &CountConfig) -> Result<CorollaryReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p as usize - 2;
    let sols: Vec<SignVector> = enumerate_solutions(n, SolutionFilter::NontrivialOnly, config)?.collect();
    let (with_ivp, nonzero_theta) = sols
        .par_iter()
        .map(|v| -> Result<(u64, u64)> {
            let mut hits = 0;
            for eta in associated_identities(v)? {
                if !eta.is_zero() && has_ivp(&eta)? {
                    hits += 1;
                }
            }
            let image = theta(v)?;
            if !image.is_zero() && !has_ivp(&image)? {
                return Err(Error::CheckFailed(format!("Θ image of order {} lacks IVP", image.m)));
            }
            Ok((hits, u64::from(!image.is_zero())))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(CorollaryReport {
        p,
        n,
        nontrivial_examined: sols.len() as u64,
        with_ivp,
        nonzero_theta_images: nonzero_theta,
    })
}
