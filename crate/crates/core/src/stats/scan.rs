use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::accumulator::MomentAccumulator;
use super::bootstrap::{bootstrap_variance_ci, DEFAULT_LEVEL, DEFAULT_RESAMPLES};
use crate::circular::sample_verblunsky;
use crate::error::{domain, Result};
use crate::gaussian::{sample_tridiagonal, semicircle_count};
use crate::parallel::map_indexed;
use crate::rng::{combine, RngStream};

/// Stream family reserved for bootstrap resampling, disjoint from replicas.
const BOOTSTRAP_FAMILY: u64 = 0xB007_5743_0000_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    #[serde(rename = "cbe")]
    Circular,
    #[serde(rename = "gbe")]
    Gaussian,
    Sine,
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::Circular => "cbe",
            Ensemble::Gaussian => "gbe",
            Ensemble::Sine => "sine",
        })
    }
}

/// A counting window. `Arc(x)` is the rescaled arc `(0, x]` (eigenangles
/// times `n`), `Span(lo, hi)` the spectral interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interval {
    Arc(f64),
    Span(f64, f64),
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Arc(x) => write!(f, "0:{x}"),
            Interval::Span(lo, hi) => write!(f, "{lo}:{hi}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub ensemble: Ensemble,
    pub beta: f64,
    pub n: usize,
    pub intervals: Vec<Interval>,
}

impl ScanSpec {
    pub fn circular(beta: f64, n: usize, xs: &[f64]) -> Self {
        Self::arcs(Ensemble::Circular, beta, n, xs)
    }

    /// Sine_β windows `(0, x]`, approximated by a circular ensemble of size `n`.
    pub fn sine(beta: f64, n: usize, xs: &[f64]) -> Self {
        Self::arcs(Ensemble::Sine, beta, n, xs)
    }

    pub fn gaussian(beta: f64, n: usize, spans: &[(f64, f64)]) -> Self {
        Self {
            ensemble: Ensemble::Gaussian,
            beta,
            n,
            intervals: spans.iter().map(|&(lo, hi)| Interval::Span(lo, hi)).collect(),
        }
    }

    fn arcs(ensemble: Ensemble, beta: f64, n: usize, xs: &[f64]) -> Self {
        Self {
            ensemble,
            beta,
            n,
            intervals: xs.iter().map(|&x| Interval::Arc(x)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(domain!("beta must be positive and finite, got {}", self.beta));
        }
        if self.n == 0 {
            return Err(domain!("n must be at least 1"));
        }
        let full = TAU * self.n as f64;
        for interval in &self.intervals {
            match (self.ensemble, *interval) {
                (Ensemble::Circular, Interval::Arc(x)) => {
                    if !(0.0..=full).contains(&x) {
                        return Err(domain!("arc {x} outside [0, 2pi n]"));
                    }
                }
                (Ensemble::Sine, Interval::Arc(x)) => {
                    if !(x >= 0.0 && x < full) {
                        return Err(domain!("window {x} outside [0, 2pi n)"));
                    }
                    if 10.0 * x > self.n as f64 {
                        return Err(domain!("n = {} too small for window {x}; need n >= 10x", self.n));
                    }
                }
                (Ensemble::Gaussian, Interval::Span(lo, hi)) => {
                    if lo.is_nan() || hi.is_nan() || lo > hi {
                        return Err(domain!("invalid interval ({lo}, {hi}]"));
                    }
                }
                (ensemble, interval) => return Err(domain!("interval {interval} does not apply to {ensemble}")),
            }
        }
        Ok(())
    }

    /// The scale variable: `x` for arcs and windows, `√n(hi - lo) ∧ n` for
    /// spectral intervals.
    pub fn xi(&self, interval: &Interval) -> f64 {
        match *interval {
            Interval::Arc(x) => x,
            Interval::Span(lo, hi) => ((self.n as f64).sqrt() * (hi - lo)).min(self.n as f64),
        }
    }

    pub fn reference_mean(&self, interval: &Interval) -> Result<f64> {
        match *interval {
            Interval::Arc(x) => Ok(x / TAU),
            Interval::Span(lo, hi) => semicircle_count(self.n, lo, hi),
        }
    }

    /// Counts of every interval for replica `replica`, which uses stream
    /// `replica` of `seed` and one draw shared by all intervals.
    pub fn replica_counts(&self, seed: u64, replica: u64) -> Result<Vec<u64>> {
        let mut rng = RngStream::new(seed, replica);
        let n = self.n;
        match self.ensemble {
            Ensemble::Circular | Ensemble::Sine => {
                let draw = sample_verblunsky(self.beta, n, &mut rng)?;
                let full = TAU * n as f64;
                let thetas: Vec<f64> = self
                    .intervals
                    .iter()
                    .map(|iv| match *iv {
                        Interval::Arc(x) if x > 0.0 && x < full => x / n as f64,
                        _ => 0.0,
                    })
                    .collect();
                let phases = draw.terminal_phases(&thetas);
                Ok(self
                    .intervals
                    .iter()
                    .zip(&phases)
                    .map(|(iv, &psi)| match *iv {
                        Interval::Arc(x) if x <= 0.0 => 0,
                        Interval::Arc(x) if x >= full => n as u64,
                        _ => draw.lattice_hits(psi),
                    })
                    .collect())
            }
            Ensemble::Gaussian => {
                let model = sample_tridiagonal(self.beta, n, &mut rng)?;
                let below = |lambda: f64| {
                    if lambda == f64::NEG_INFINITY {
                        0
                    } else if lambda == f64::INFINITY {
                        n
                    } else {
                        model.sturm_count(lambda)
                    }
                };
                Ok(self
                    .intervals
                    .iter()
                    .map(|iv| match *iv {
                        Interval::Span(lo, hi) => (below(hi) - below(lo)) as u64,
                        Interval::Arc(_) => unreachable!("validated"),
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub ensemble: Ensemble,
    pub beta: f64,
    pub n: usize,
    pub interval: String,
    pub xi: f64,
    pub m: usize,
    pub mean: f64,
    pub variance: f64,
    pub var_ci_lo: f64,
    pub var_ci_hi: f64,
    pub ref_mean: f64,
}

/// `count` points from `lo` to `hi`, equally spaced in `log`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(domain!("geometric grid needs 0 < lo <= hi and count >= 1"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (ratio * i as f64).exp() })
        .collect())
}

/// Twelve scales from 1 to `n/2`.
pub fn default_xi_grid(n: usize) -> Result<Vec<f64>> {
    geometric_grid(1.0, (n as f64 / 2.0).max(1.0), 12)
}

/// Spectral intervals centered at `center` with `√n(hi - lo)` equal to
/// each entry of `widths`.
pub fn centered_spans(n: usize, center: f64, widths: &[f64]) -> Vec<(f64, f64)> {
    let root = (n as f64).sqrt();
    widths
        .iter()
        .map(|w| (center - 0.5 * w / root, center + 0.5 * w / root))
        .collect()
}

/// Draw `m` replicas, count every interval of `spec` in each, and summarize
/// each interval as a row with a bootstrap interval for the variance.
/// Output depends only on `spec`, `m` and `seed`.
pub fn variance_scan(spec: &ScanSpec, m: usize, seed: u64, workers: usize) -> Result<Vec<ScanRow>> {
    if m < 2 {
        return Err(domain!("need at least two replicas, got {m}"));
    }
    spec.validate()?;
    let replicas: Vec<Vec<u64>> = map_indexed(workers, m, |i| spec.replica_counts(seed, i as u64))
        .into_iter()
        .collect::<Result<_>>()?;
    let boot_seed = combine(seed, BOOTSTRAP_FAMILY);
    spec.intervals
        .iter()
        .enumerate()
        .map(|(j, interval)| {
            let sample: Vec<f64> = replicas.iter().map(|r| r[j] as f64).collect();
            let acc: MomentAccumulator = sample.iter().copied().collect();
            let ci = bootstrap_variance_ci(&sample, DEFAULT_RESAMPLES, DEFAULT_LEVEL, combine(boot_seed, j as u64), workers);
            Ok(ScanRow {
                ensemble: spec.ensemble,
                beta: spec.beta,
                n: spec.n,
                interval: interval.to_string(),
                xi: spec.xi(interval),
                m,
                mean: acc.mean(),
                variance: acc.variance(),
                var_ci_lo: ci.lo,
                var_ci_hi: ci.hi,
                ref_mean: spec.reference_mean(interval)?,
            })
        })
        .collect()
}
