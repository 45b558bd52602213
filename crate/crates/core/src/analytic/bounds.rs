use std::f64::consts::{LOG2_E, PI};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bigutil::{binomial, log2_biguint, log2_sum, pow2};
use crate::error::{Error, Result};
use crate::exactcount::for_each_binomial;

/// `erf(z)`: power series for `|z| ≤ 3`, continued fraction beyond.
pub fn erf(z: f64) -> f64 {
    if z.is_nan() {
        return z;
    }
    if z < 0.0 {
        return -erf(-z);
    }
    if z <= 3.0 {
        erf_series(z)
    } else {
        1.0 - erfc_cf(z)
    }
}

/// `erfc(z) = 1 − erf(z)`, without cancellation for large `z`.
pub fn erfc(z: f64) -> f64 {
    if z > 3.0 {
        erfc_cf(z)
    } else {
        1.0 - erf(z)
    }
}

// erf(z) = 2/√π e^{−z²} Σ_k 2^k z^{2k+1} / (1·3···(2k+1)), all terms positive
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut k = 0.0;
    while term > sum * 1e-17 {
        k += 1.0;
        term *= 2.0 * z2 / (2.0 * k + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-z2).exp() * sum
}

// erfc(z) = e^{−z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), modified Lentz
fn erfc_cf(z: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 / 2.0;
        d = z + a * d;
        d = if d == 0.0 { tiny } else { d };
        c = z + a / c;
        c = if c == 0.0 { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / PI.sqrt() / f
}

/// Binary entropy in bits; the endpoints give 0.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "binary entropy needs alpha in [0, 1], got {alpha}"
        )));
    }
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(0.0);
    }
    Ok(-alpha * alpha.log2() - (1.0 - alpha) * (1.0 - alpha).log2())
}

/// `log2 sqrt(2·C(2n+1, n+1))`.
pub fn holder_upper_bound(n: usize) -> Result<f64> {
    let n = n as u64;
    if n == 0 {
        return Err(Error::InvalidArgument("the bound needs n ≥ 1".into()));
    }
    Ok((1.0 + log2_biguint(&binomial(2 * n + 1, n + 1))) / 2.0)
}

/// Exact test of `j ≤ sqrt(2·C(2n+1, n+1))`.
pub fn holder_admits(n: usize, j: &BigUint) -> bool {
    let n = n as u64;
    j * j <= binomial(2 * n + 1, n + 1) * 2u32
}

/// `log2 sqrt(2·C(2m−1, m))`, the bound on signed-sum solutions of `m` terms.
pub fn es_upper_bound(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("the bound needs m ≥ 1".into()));
    }
    Ok((1.0 + log2_biguint(&binomial(2 * m - 1, m))) / 2.0)
}

/// `log2(2^{n+2}/n)`.
pub fn remark_upper_bound(n: usize) -> Result<f64> {
    let n = n as u64;
    if n < 5 {
        return Err(Error::InvalidArgument(format!("the bound needs n ≥ 5, got {n}")));
    }
    Ok((n + 2) as f64 - (n as f64).log2())
}

/// Exact test of `j ≤ 2^{n+2}/n`.
pub fn remark_admits(n: usize, j: &BigUint) -> bool {
    let n = n as u64;
    j * n <= pow2(n + 2)
}

/// `log2(0.3258) + 3·2^{e−2} − 2^{(e−3)/2}`, the bound for `n = 2^e`.
pub fn pow2_upper_bound(exponent: u32) -> Result<f64> {
    if !(3..=60).contains(&exponent) {
        return Err(Error::InvalidArgument(format!(
            "the power-of-two bound needs 3 ≤ exponent ≤ 60, got {exponent}"
        )));
    }
    let e = exponent as f64;
    Ok(0.3258f64.log2() + 3.0 * (e - 2.0).exp2() - ((e - 3.0) / 2.0).exp2())
}

/// `S_{n,s} = Σ_{j=0}^{⌊n/2⌋−s} C(n,j)²`, exactly.
pub fn partial_square_sum(n: usize, s: usize) -> Result<BigUint> {
    let n = n as u64;
    let s = s as u64; let half = n / 2;
    if s > half {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds ⌊n/2⌋ = {half}")));
    }
    let top = half - s;
    let mut acc = BigUint::zero();
    for_each_binomial(n as usize, |j, c| {
        if j as u64 <= top {
            acc += c * c;
        }
    });
    Ok(acc)
}

/// Exact `Σ_{j=0}^{⌊n/2⌋−s} C(n,j)` and `log2` of the bound `2^n e^{−2s²/n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialRowBound {
    #[serde(with = "crate::decimal")]
    pub exact: BigUint,
    pub bound_log2: f64,
}

impl PartialRowBound {
    pub fn bound(&self) -> f64 {
        self.bound_log2.exp2()
    }
}

pub fn hoeffding_partial_row_bound(n: usize, s: usize) -> Result<PartialRowBound> {
    let n = n as u64;
    let s = s as u64; if n == 0 {
        return Err(Error::InvalidArgument("the bound needs n ≥ 1".into()));
    }
    let half = n / 2;
    if s > half {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds ⌊n/2⌋ = {half}")));
    }
    let mut exact = BigUint::zero();
    for_each_binomial(n as usize, |j, c| {
        if j as u64 <= half - s {
            exact += c;
        }
    });
    let bound_log2 = n as f64 - 2.0 * (s * s) as f64 / n as f64 * LOG2_E;
    if log2_biguint(&exact) >= bound_log2 {
        return Err(Error::CheckFailed(format!(
            "partial row sum of row {n} at s = {s} is not below its bound"
        )));
    }
    Ok(PartialRowBound { exact, bound_log2 })
}

/// The three readings of the refined bound, all in `log2` with the `o(1)`
/// correction set to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedBound {
    pub n: usize,
    /// `log2(2^{n+2}/n)`.
    pub remark_log2: f64,
    /// The tail exponent taken literally with `α_s = n/(⌊n/2⌋−s)`, which is
    /// outside the entropy domain; `None` whenever that happens.
    pub literal_log2: Option<f64>,
    /// The tail exponent with `α_s = (⌊n/2⌋−s)/n`.
    pub ratio_log2: f64,
    /// Head and tails built from exact `S_{n,s}` and exact interval widths,
    /// over `s = 1..⌊n/2⌋−1`.
    pub exact_sums_log2: f64,
    /// As `exact_sums_log2`, adding the last interval `[1/(2n), 1/2]`.
    pub complete_log2: f64,
    /// Always true: the `o(1)` term is dropped.
    pub o1_dropped: bool,
}

impl RefinedBound {
    /// The reading used as the refined bound in reports.
    pub fn refined_log2(&self) -> f64 {
        self.complete_log2
    }
}

fn head_log2(sum_log2: f64, middle_log2: f64) -> f64 {
    let z = PI / 2.0 * (sum_log2 / 2.0 - middle_log2).exp2();
    erf(z).log2() - 1.0 - 0.5 * PI.log2() - 0.5 * sum_log2
}

/// Refined upper bound for `J_n`, `n ≥ 5`.
pub fn refined_upper_bound(n: usize) -> Result<RefinedBound> {
    let remark_log2 = remark_upper_bound(n)?;
    let nn = n;
    let n = n as u64;
    let half = n / 2;
    let row: Vec<BigUint> = (0..=half).map(|j| binomial(n, j)).collect();
    let lb: Vec<f64> = row.iter().map(log2_biguint).collect();
    // prefix sums of squares: sq[t] = Σ_{j≤t} C(n,j)²
    let mut sq = Vec::with_capacity(row.len());
    let mut acc = BigUint::zero();
    for c in &row {
        acc += c * c;
        sq.push(acc.clone());
    }
    let central = log2_biguint(&binomial(2 * n, n));
    let hf = half as f64;

    let tail = |s: u64, entropy: f64| {
        let idx = (half - s + 1) as usize;
        let e = PI * PI * (2.0 * n as f64 * entropy - 2.0 * lb[idx]).exp2() / (4.0 * (hf + 1.0));
        -e * LOG2_E + (s as f64).log2() - ((half - s + 1) as f64).log2() - lb[idx]
    };

    let exact_tail = |s: u64| {
        let lo = (half - s) as usize;
        let hi = lo + 1;
        let e = PI * PI * (log2_biguint(&sq[lo]) - 2.0 * lb[hi]).exp2() / 4.0;
        let width = log2_biguint(&(&row[hi] - &row[lo])) - 1.0 - lb[lo] - lb[hi];
        -e * LOG2_E + width
    };

    let mut literal = Some(vec![head_log2(central, lb[half as usize])]);
    let mut ratio = vec![head_log2(central, lb[half as usize])];
    for s in 1..half {
        let k = (half - s) as f64;
        match (literal.as_mut(), binary_entropy(n as f64 / k)) {
            (Some(terms), Ok(h)) => terms.push(tail(s, h)),
            _ => literal = None,
        }
        ratio.push(tail(s, binary_entropy(k / n as f64)?));
    }

    let mut exact = vec![head_log2(log2_biguint(&sq[half as usize]), lb[half as usize])];
    for s in 1..half {
        exact.push(exact_tail(s));
    }
    let mut complete = exact.clone();
    complete.push(exact_tail(half));

    let scale = (n + 2) as f64;
    Ok(RefinedBound {
        n: nn,
        remark_log2,
        literal_log2: literal.map(|t| scale + log2_sum(&t)),
        ratio_log2: scale + log2_sum(&ratio),
        exact_sums_log2: scale + log2_sum(&exact),
        complete_log2: scale + log2_sum(&complete),
        o1_dropped: true,
    })
}

/// Every bound for `n`, with the exact count when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    #[serde(with = "crate::decimal::option")]
    pub exact: Option<BigUint>,
    pub holder_log2: f64,
    pub remark_log2: Option<f64>,
    pub refined: Option<RefinedBound>,
    pub pow2_log2: Option<f64>,
}

pub fn bound_report(n: usize, exact: Option<BigUint>) -> Result<BoundReport> {
    let holder_log2 = holder_upper_bound(n)?;
    let (remark_log2, refined) = if n >= 5 {
        (Some(remark_upper_bound(n)?), Some(refined_upper_bound(n)?))
    } else {
        (None, None)
    };
    let pow2_log2 = if n.is_power_of_two() && n >= 8 {
        Some(pow2_upper_bound(n.trailing_zeros())?)
    } else {
        None
    };
    Ok(BoundReport {
        n,
        exact,
        holder_log2,
        remark_log2,
        refined,
        pow2_log2,
    })
}

impl BoundReport {
    /// Names of the bounds the exact value exceeds; empty when consistent.
    /// The Hölder and remark bounds are compared exactly.
    pub fn violations(&self) -> Vec<&'static str> {
        let Some(j) = &self.exact else {
            return Vec::new();
        };
        let lj = log2_biguint(j);
        let mut out = Vec::new();
        if !holder_admits(self.n, j) {
            out.push("holder");
        }
        if self.remark_log2.is_some() && !remark_admits(self.n, j) {
            out.push("remark");
        }
        if let Some(r) = &self.refined {
            if lj > r.refined_log2() {
                out.push("refined");
            }
        }
        if let Some(p) = self.pow2_log2 {
            if lj > p {
                out.push("pow2");
            }
        }
        out
    }
}
