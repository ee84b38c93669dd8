use serde::{Deserialize, Serialize};

use super::accumulator::MomentAccumulator;
use crate::circular::sample_verblunsky;
use crate::error::{domain, Result};
use crate::parallel::map_indexed;
use crate::rng::RngStream;

/// Bound on `E[(ψ_k(θ, a) - a)²]` for `θ <= 1/n`.
pub const SECOND_MOMENT_BOUND: f64 = 3500.0;

/// Two-sided 95% normal quantile used for the Wilson intervals.
const Z95: f64 = 1.959963984540054;

/// `P[ψ_k(θ, a) >= a + b] <= 12 e^{-b/12}` for `θ <= 1/n`.
pub fn tail_bound(b: f64) -> f64 {
    12.0 * (-b / 12.0).exp()
}

/// Wilson score interval for `hits` successes out of `m`.
pub fn wilson_interval(hits: u64, m: u64, z: f64) -> (f64, f64) {
    if m == 0 {
        return (0.0, 1.0);
    }
    let m = m as f64;
    let p = hits as f64 / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = z / denom * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub b: f64,
    pub hits: u64,
    pub empirical: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub bound: f64,
}

impl TailRow {
    /// The Wilson upper limit sits below the bound.
    pub fn holds(&self) -> bool {
        self.wilson_hi <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub beta: f64,
    pub n: usize,
    pub theta: f64,
    pub a: f64,
    pub depth: usize,
    pub m: usize,
    pub rows: Vec<TailRow>,
    /// Empirical `E[(ψ_k - a)²]` and its standard error.
    pub second_moment: f64,
    pub second_moment_se: f64,
    pub max_excursion: f64,
}

/// Empirical upper tail of `ψ_{n-1}(θ, a) - a` over `m` draws. Draw `i` uses
/// stream `i` of `seed`.
#[allow(clippy::too_many_arguments)]
pub fn tail_check(beta: f64, n: usize, theta: f64, a: f64, b_grid: &[f64], m: usize, seed: u64, workers: usize) -> Result<TailReport> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    if !(0.0..=1.0 / n as f64).contains(&theta) {
        return Err(domain!("theta = {theta} outside [0, 1/n]"));
    }
    if !a.is_finite() {
        return Err(domain!("a must be finite"));
    }
    let depth = n - 1;
    let excursions: Vec<f64> = map_indexed(workers, m, |i| -> Result<f64> {
        let mut rng = RngStream::new(seed, i as u64);
        let draw = sample_verblunsky(beta, n, &mut rng)?;
        Ok(draw.phase(theta, a, depth) - a)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let rows = b_grid
        .iter()
        .map(|&b| {
            let hits = excursions.iter().filter(|&&d| d >= b).count() as u64;
            let (lo, hi) = wilson_interval(hits, m as u64, Z95);
            TailRow {
                b,
                hits,
                empirical: if m == 0 { 0.0 } else { hits as f64 / m as f64 },
                wilson_lo: lo,
                wilson_hi: hi,
                bound: tail_bound(b),
            }
        })
        .collect();
    let squares: MomentAccumulator = excursions.iter().map(|d| d * d).collect();
    Ok(TailReport {
        beta,
        n,
        theta,
        a,
        depth,
        m,
        rows,
        second_moment: squares.mean(),
        second_moment_se: squares.std_dev() / (m.max(1) as f64).sqrt(),
        max_excursion: excursions.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
