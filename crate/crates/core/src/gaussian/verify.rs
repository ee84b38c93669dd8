//! Phase-sweep counts checked against Sturm counts on random models.

use serde::{Deserialize, Serialize};

use super::sweep::phase_sweep;
use super::tridiag::{conjugate_model, sample_tridiagonal};
use crate::error::Result;
use crate::parallel::map_indexed;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub draw: usize,
    pub lambda: f64,
    pub sturm: usize,
    pub sweep: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub evaluations: usize,
    /// Evaluations skipped because `Λ` sat numerically on an eigenvalue.
    pub flagged: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn flagged_fraction(&self) -> f64 {
        if self.evaluations == 0 {
            0.0
        } else {
            self.flagged as f64 / self.evaluations as f64
        }
    }
}

/// The spectral parameters tried for one draw: uniform on a window a little
/// wider than the semicircle support `[-2√n, 2√n]`.
pub fn probe_points(n: usize, count: usize, rng: &mut RngStream) -> Vec<f64> {
    let half = 2.0 * (n as f64).sqrt() + 4.0;
    (0..count).map(|_| (2.0 * rng.uniform() - 1.0) * half).collect()
}

/// Sample `draws` models and compare the phase-sweep count at split `n/2`
/// with the Sturm count at `per_draw` random points each. Draw `i` uses
/// stream `i` of `seed` for both the matrix and its probe points.
pub fn cross_check(beta: f64, n: usize, draws: usize, per_draw: usize, seed: u64, workers: usize) -> Result<CrossCheckReport> {
    let per = map_indexed(workers, draws, |i| -> Result<(usize, Vec<Mismatch>)> {
        let mut rng = RngStream::new(seed, i as u64);
        let model = sample_tridiagonal(beta, n, &mut rng)?;
        let conj = conjugate_model(&model)?;
        let mut flagged = 0;
        let mut bad = Vec::new();
        for lambda in probe_points(n, per_draw, &mut rng) {
            let sweep = phase_sweep(&conj, lambda, n / 2)?;
            if sweep.ill_conditioned {
                flagged += 1;
                continue;
            }
            let sturm = model.sturm_count(lambda);
            if sturm != sweep.count {
                bad.push(Mismatch {
                    draw: i,
                    lambda,
                    sturm,
                    sweep: sweep.count,
                });
            }
        }
        Ok((flagged, bad))
    });
    let mut report = CrossCheckReport {
        evaluations: draws * per_draw,
        ..Default::default()
    };
    for r in per {
        let (flagged, bad) = r?;
        report.flagged += flagged;
        report.mismatches.extend(bad);
    }
    Ok(report)
}
