use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactcount::{count_bisections, for_each_binomial, CountConfig, Strategy};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks `C(p−1, j) ≡ (−1)^j (mod p)` for every `j`.
pub fn binomial_congruence_check(p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut ok = true;
    for_each_binomial(p as usize - 1, |j, c| {
        let r = (c % BigUint::from(p)).to_u64().unwrap_or(u64::MAX);
        let expected = if j % 2 == 0 { 1 % p } else { p - 1 };
        ok &= r == expected;
    });
    Ok(ok)
}

/// True iff `J_{p−1} = 2`; also fails unless the congruence holds.
pub fn jp_minus_one_check(p: u64, config: &CountConfig) -> Result<bool> {
    if !binomial_congruence_check(p)? {
        return Err(Error::CheckFailed(format!("C({}, j) ≢ (−1)^j (mod {p})", p - 1)));
    }
    let r = count_bisections(p as usize - 1, Strategy::MeetInMiddle, config)?;
    Ok(r.total == BigUint::from(2u8))
}
