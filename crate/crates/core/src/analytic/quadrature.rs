use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Parameters of a composite Gauss–Legendre rule over `[0, 1]`.
///
/// Panels are sized so that the fastest oscillation of the integrand gets at
/// least `nodes_per_period` nodes per period. The integrals size their panels
/// from `max(max_frequency, band limit of the integrand)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub max_frequency: BigUint,
    pub nodes_per_period: usize,
    pub absolute_tolerance: f64,
}

pub const DEFAULT_NODES_PER_PERIOD: usize = 16;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Hard limit on quadrature nodes for a single evaluation.
pub const MAX_NODES: u128 = 1 << 28;

impl QuadratureSpec {
    pub fn new(
        max_frequency: BigUint,
        nodes_per_period: usize,
        absolute_tolerance: f64,
    ) -> Result<Self> {
        let spec = QuadratureSpec {
            max_frequency,
            nodes_per_period,
            absolute_tolerance,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_period < 8 {
            return Err(Error::InvalidArgument(format!(
                "nodes_per_period must be at least 8, got {}",
                self.nodes_per_period
            )));
        }
        if !(self.absolute_tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "absolute_tolerance must be positive, got {}",
                self.absolute_tolerance
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            max_frequency: BigUint::from(1u8),
            nodes_per_period: DEFAULT_NODES_PER_PERIOD,
            absolute_tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(order: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise summation, so the result depends only on the order of `xs`.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Composite rule with `panels` equal panels of `order` nodes over `[0, 1]`.
pub(crate) fn composite<F>(f: &F, panels: u64, order: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(order);
    let h = 1.0 / panels as f64;
    let sums: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let a = p as f64 * h;
            let vals: Vec<f64> = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * f(a + 0.5 * h * (x + 1.0)))
                .collect();
            0.5 * h * pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&sums)
}

/// Integrates `scale · ∫₀¹ f` with panels covering one period of frequency
/// `band` each (a period of `cos(π k s)` being `2/k`), then checks the result
/// against a run with twice as many panels.
pub(crate) fn integrate_band_limited<F>(
    f: F,
    band: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    let requested = spec.max_frequency.to_f64().unwrap_or(f64::INFINITY);
    let band = band.max(requested).max(1.0);
    let panels = (band / 2.0).ceil();
    let nodes = panels * spec.nodes_per_period as f64 * 3.0;
    if !nodes.is_finite() || nodes > MAX_NODES as f64 {
        return Err(Error::ResourceLimit {
            what: "quadrature nodes".into(),
            needed: if nodes.is_finite() { nodes as u128 } else { u128::MAX },
            budget: MAX_NODES,
        });
    }
    let panels = panels as u64;
    let coarse = scale * composite(&f, panels, spec.nodes_per_period);
    let fine = scale * composite(&f, 2 * panels, spec.nodes_per_period);
    let estimate = (fine - coarse).abs();
    if !(estimate <= spec.absolute_tolerance) {
        return Err(Error::QuadratureNotConverged {
            tolerance: spec.absolute_tolerance,
            estimate,
        });
    }
    Ok(fine)
}
