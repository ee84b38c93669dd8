use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::accumulator::MomentAccumulator;
use crate::parallel::map_indexed;
use crate::rng::RngStream;

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Linear-interpolation quantile of sorted data (the "type 7" rule).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn quantile(sample: &[f64], p: f64) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, p)
}

/// Percentile bootstrap interval for the sample variance. Resample `b` draws
/// its indices from stream `b` of `seed`, so the interval does not depend on
/// `workers`. The interval is widened if needed so that it contains the
/// point estimate.
pub fn bootstrap_variance_ci(sample: &[f64], resamples: usize, level: f64, seed: u64, workers: usize) -> ConfidenceInterval {
    let point: MomentAccumulator = sample.iter().copied().collect();
    let estimate = point.variance();
    if sample.len() < 2 || resamples == 0 {
        return ConfidenceInterval { lo: estimate, hi: estimate };
    }
    let m = sample.len();
    // Centering first keeps the sum-of-squares formula accurate.
    let center = point.mean();
    let variance_of = |s: f64, ss: f64| ((ss - s * s / m as f64) / (m - 1) as f64).max(0.0);
    let groups = distinct_counts(sample);
    let mut stats = if groups.len() * 4 <= m {
        // Few distinct values (counts): resampling m indices is the same as
        // one multinomial draw of the value frequencies.
        map_indexed(workers, resamples, |b| {
            let mut rng = RngStream::new(seed, b as u64);
            let (mut s, mut ss) = (0.0, 0.0);
            let mut left = m as u64;
            let mut mass = m as u64;
            for &(value, count) in &groups {
                if left == 0 {
                    break;
                }
                let k = if count == mass {
                    left
                } else {
                    Binomial::new(left, count as f64 / mass as f64)
                        .expect("probability in [0, 1]")
                        .sample(&mut rng)
                };
                let d = value - center;
                s += k as f64 * d;
                ss += k as f64 * d * d;
                left -= k;
                mass -= count;
            }
            variance_of(s, ss)
        })
    } else {
        map_indexed(workers, resamples, |b| {
            let mut rng = RngStream::new(seed, b as u64);
            let (mut s, mut ss) = (0.0, 0.0);
            for _ in 0..m {
                let d = sample[rng.index(m)] - center;
                s += d;
                ss += d * d;
            }
            variance_of(s, ss)
        })
    };
    stats.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    ConfidenceInterval {
        lo: quantile_sorted(&stats, tail).min(estimate),
        hi: quantile_sorted(&stats, 1.0 - tail).max(estimate),
    }
}

/// Distinct values in increasing order with their multiplicities.
fn distinct_counts(sample: &[f64]) -> Vec<(f64, u64)> {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for x in sorted {
        match groups.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => groups.push((x, 1)),
        }
    }
    groups
}
