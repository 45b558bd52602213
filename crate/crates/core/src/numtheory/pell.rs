use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `F_m` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(m: u64) -> BigUint {
    fibonacci_pair(m).0
}

/// `(F_m, F_{m+1})` by fast doubling.
pub fn fibonacci_pair(m: u64) -> (BigUint, BigUint) {
    if m == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fibonacci_pair(m / 2);
    // F_{2j} = F_j (2F_{j+1} − F_j), F_{2j+1} = F_j² + F_{j+1}²
    let c = &a * (&b * 2u8 - &a);
    let d = &a * &a + &b * &b;
    if m % 2 == 0 {
        (c, d)
    } else {
        (d.clone(), c + d)
    }
}

/// `L_m` with `L_0 = 2`, `L_1 = 1`.
pub fn lucas(m: u64) -> BigUint {
    if m == 0 {
        return BigUint::from(2u8);
    }
    let (f, g) = fibonacci_pair(m - 1);
    // L_m = F_{m−1} + F_{m+1} = 2F_{m−1} + F_m
    f * 2u8 + g
}

/// A solution of `X² − 5Y² = −4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub index: u64,
    #[serde(with = "crate::decimal")]
    pub x: BigUint,
    #[serde(with = "crate::decimal")]
    pub y: BigUint,
}

impl PellSolution {
    pub fn satisfies(&self) -> bool {
        let x = BigInt::from(self.x.clone());
        let y = BigInt::from(self.y.clone());
        &x * &x - BigInt::from(5) * &y * &y == BigInt::from(-4)
    }
}

/// The first `count` solutions `(F_{2m+1} + 2F_{2m}, F_{2m+1})`, `m = 0, 1, …`.
pub fn pell_solutions(count: usize) -> Result<Vec<PellSolution>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let mut out = Vec::with_capacity(count);
    for m in 0..count as u64 {
        let (f2m, f2m1) = fibonacci_pair(2 * m);
        let sol = PellSolution {
            index: m,
            x: &f2m1 + &f2m * 2u8,
            y: f2m1,
        };
        if !sol.satisfies() {
            return Err(Error::CheckFailed(format!("Pell solution {m} fails X² − 5Y² = −4")));
        }
        out.push(sol);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        let f: Vec<u64> = (0..15).map(|m| fibonacci(m).try_into().unwrap()).collect();
        assert_eq!(f, [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377]);
        let l: Vec<u64> = (0..10).map(|m| lucas(m).try_into().unwrap()).collect();
        assert_eq!(l, [2, 1, 3, 4, 7, 11, 18, 29, 47, 76]);
        let mut a = BigUint::zero();
        let mut b = BigUint::one();
        for m in 0..300 {
            assert_eq!(fibonacci(m), a);
            let c = &a + &b;
            a = b;
            b = c;
        }
    }

    #[test]
    fn lucas_fibonacci_identity() {
        for m in 0..200u64 {
            let l = BigInt::from(lucas(m));
            let f = BigInt::from(fibonacci(m));
            let rhs = if m % 2 == 0 { 4 } else { -4 };
            assert_eq!(&l * &l - BigInt::from(5) * &f * &f, BigInt::from(rhs));
        }
    }

    #[test]
    fn first_solutions() {
        let s = pell_solutions(4).unwrap();
        let pairs: Vec<(u64, u64)> = s
            .iter()
            .map(|p| (p.x.clone().try_into().unwrap(), p.y.clone().try_into().unwrap()))
            .collect();
        assert_eq!(pairs, [(1, 1), (4, 2), (11, 5), (29, 13)]);
        for p in pell_solutions(60).unwrap() {
            assert!(p.satisfies());
            assert_eq!(p.x, lucas(2 * p.index + 1));
        }
        assert!(pell_solutions(0).is_err());
    }

    #[test]
    fn exhaustive_below_largest() {
        let sols = pell_solutions(11).unwrap();
        let xs: Vec<u64> = sols.iter().map(|p| p.x.clone().try_into().unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let limit = 10_000u64.min(*xs.last().unwrap());
        let mut found = Vec::new();
        for x in 1..=limit {
            let t = x * x + 4;
            if t % 5 == 0 {
                let y2 = t / 5;
                let y = (y2 as f64).sqrt().round() as u64;
                if y * y == y2 {
                    found.push(x);
                }
            }
        }
        let expected: Vec<u64> = xs.into_iter().filter(|&x| x <= limit).collect();
        assert_eq!(found, expected);
    }
}
