use crate::circular::{normalized_deviation_sup, sample_verblunsky};
use crate::error::{domain, Result};
use crate::parallel::map_indexed;
use crate::rng::RngStream;

/// Evaluation points for the supremum over `[0, x_max]`: spacing 0.25 up to
/// 20, then spacing 1.
pub fn regularity_grid(x_max: f64) -> Vec<f64> {
    let fine_end = x_max.min(20.0);
    let mut grid: Vec<f64> = (1..).map(|i| 0.25 * i as f64).take_while(|&x| x <= fine_end).collect();
    let mut x = fine_end.floor() + 1.0;
    while x <= x_max {
        grid.push(x);
        x += 1.0;
    }
    if grid.last().is_none_or(|&last| last < x_max) {
        grid.push(x_max);
    }
    grid
}

/// `m` samples of `sup_x |N(0, x] - x/2π| / (1 + x)^α` for circular ensembles
/// of size `n`. Draw `i` uses stream `i` of `seed`.
#[allow(clippy::too_many_arguments)]
pub fn regularity_sample(beta: f64, n: usize, grid: &[f64], alpha: f64, m: usize, seed: u64, workers: usize) -> Result<Vec<f64>> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(domain!("alpha must be finite and non-negative"));
    }
    map_indexed(workers, m, |i| {
        let mut rng = RngStream::new(seed, i as u64);
        let draw = sample_verblunsky(beta, n, &mut rng)?;
        normalized_deviation_sup(&draw, grid, alpha)
    })
    .into_iter()
    .collect()
}
