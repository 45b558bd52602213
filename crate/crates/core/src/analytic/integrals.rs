use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::quadrature::{integrate_band_limited, QuadratureSpec};
use crate::bigutil::binomial;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`jn_integral_estimate`].
pub const JN_INTEGRAL_CAP: usize = 16;
/// Largest `Σ x_j` accepted by [`es_count_integral`].
pub const ES_SUM_CAP: u64 = 1 << 17;
/// Largest list accepted by [`freiman_count`].
pub const FREIMAN_CAP: usize = 30;
/// Dense DP table limit; larger targets use a sparse map.
const DENSE_LIMIT: u128 = 1 << 24;

fn cos_product(freqs: &[f64], s: f64) -> f64 {
    freqs.iter().map(|f| (PI * f * s).cos()).product()
}

/// `2^{n+1} ∫₀¹ Π_j cos(π C(n,j) s) ds`, which equals `J_n`.
pub fn jn_integral_estimate(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let n = n as u64;
    if n > JN_INTEGRAL_CAP as u64 {
        return Err(Error::CapExceeded {
            what: "n".into(),
            value: n.into(),
            cap: JN_INTEGRAL_CAP as u128,
        });
    }
    let freqs: Vec<f64> = (0..=n).map(|j| binomial(n, j).to_f64().unwrap()).collect();
    let band = (1u64 << n) as f64;
    integrate_band_limited(|s| cos_product(&freqs, s), band, 2f64.powi(n as i32 + 1), spec)
}

/// Number of sign vectors with `Σ ±x_j = 0`, as `2^m ∫₀¹ Π cos(π x_j s) ds`.
pub fn es_count_integral(xs: &[u64], spec: &QuadratureSpec) -> Result<f64> {
    if xs.contains(&0) {
        return Err(Error::InvalidArgument("entries must be positive".into()));
    }
    let total: u128 = xs.iter().map(|&x| x as u128).sum();
    if total > ES_SUM_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "sum of entries".into(),
            value: total,
            cap: ES_SUM_CAP.into(),
        });
    }
    let freqs: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
    let scale = 2f64.powi(xs.len() as i32);
    integrate_band_limited(|s| cos_product(&freqs, s), total as f64, scale, spec)
}

fn freiman_target(a: &[u64], b: &BigUint) -> Result<u128> {
    if a.len() > FREIMAN_CAP {
        return Err(Error::CapExceeded {
            what: "list length".into(),
            value: a.len() as u128,
            cap: FREIMAN_CAP as u128,
        });
    }
    if a.contains(&0) {
        return Err(Error::InvalidArgument("entries must be positive".into()));
    }
    let total: u128 = a.iter().map(|&x| x as u128).sum();
    let b = b
        .to_u128()
        .filter(|&b| 2 * b <= total)
        .ok_or_else(|| Error::InvalidArgument(format!("b = {b} exceeds half the total {total}")))?;
    Ok(b)
}

/// Exact number of `x ∈ {0,1}^m` with `Σ a_j x_j = b`.
pub fn freiman_count(a: &[u64], b: &BigUint) -> Result<u64> {
    let b = freiman_target(a, b)?;
    if b <= DENSE_LIMIT {
        let b = b as usize;
        let mut ways = vec![0u64; b + 1];
        ways[0] = 1;
        for &x in a {
            let x = x as usize;
            if x > b {
                continue;
            }
            for t in (x..=b).rev() {
                ways[t] += ways[t - x];
            }
        }
        return Ok(ways[b]);
    }
    let mut ways: BTreeMap<u128, u64> = BTreeMap::from([(0, 1)]);
    for &x in a {
        let shifted: Vec<(u128, u64)> = ways
            .iter()
            .map(|(&t, &c)| (t + x as u128, c))
            .filter(|&(t, _)| t <= b)
            .collect();
        for (t, c) in shifted {
            *ways.entry(t).or_insert(0) += c;
        }
    }
    Ok(ways.get(&b).copied().unwrap_or(0))
}

/// `Re ∫₀¹ e^{−2πixb} Π (1 + e^{2πixa_j}) dx`.
pub fn freiman_integral(a: &[u64], b: &BigUint, spec: &QuadratureSpec) -> Result<f64> {
    let b = freiman_target(a, b)?;
    let total: u128 = a.iter().map(|&x| x as u128).sum();
    // the integrand is a trigonometric polynomial of degree max(b, Σa − b)
    let degree = b.max(total - b) as f64;
    let a: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let bf = b as f64;
    let f = move |x: f64| {
        let mut z = Complex64::from_polar(1.0, -2.0 * PI * x * bf);
        for &aj in &a {
            z *= Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 2.0 * PI * x * aj);
        }
        z.re
    };
    integrate_band_limited(f, 2.0 * degree, 1.0, spec)
}

/// Exact count together with the integral, failing unless they agree within 0.49.
pub fn freiman_check(a: &[u64], b: &BigUint, spec: &QuadratureSpec) -> Result<(u64, f64)> {
    let exact = freiman_count(a, b)?;
    let approx = freiman_integral(a, b, spec)?;
    if (approx - exact as f64).abs() >= 0.49 {
        return Err(Error::CheckFailed(format!(
            "Freiman integral {approx} disagrees with exact count {exact}"
        )));
    }
    Ok((exact, approx))
}
