//! Exact number variance of the circular unitary ensemble (β = 2).
//!
//! With `E|Tr U^k|² = min(k, n)` and the Fourier coefficients of the
//! indicator of an arc of length `L`,
//!
//! ```text
//! Var N = Σ_{k>=1} 2 min(k, n) sin²(kL/2) / (π² k²).
//! ```
//!
//! For `k > n` the weight is constant, so the tail is `n` times the
//! remainder of `Σ sin²(kx)/k² = x(π - x)/2` (`0 <= x <= π`) and the sum
//! closes after `n` terms.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Result};

pub fn cue_variance_oracle(n: usize, arc: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    if !(0.0..=TAU).contains(&arc) {
        return Err(domain!("arc length {arc} outside [0, 2pi]"));
    }
    let x = 0.5 * arc;
    let mut head = 0.0;
    let mut partial = 0.0;
    for k in 1..=n {
        let k = k as f64;
        let s = (k * x).sin();
        let term = s * s / (k * k);
        head += k * term;
        partial += term;
    }
    let tail = n as f64 * (0.5 * x * (PI - x) - partial);
    Ok((2.0 / (PI * PI) * (head + tail)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Direct truncation of the series; the tail beyond `terms` is at most
    /// `2n/(π² terms)`.
    fn truncated(n: usize, arc: f64, terms: usize) -> f64 {
        (1..=terms)
            .map(|k| {
                let kf = k as f64;
                2.0 * k.min(n) as f64 * (kf * arc / 2.0).sin().powi(2) / (PI * PI * kf * kf)
            })
            .sum()
    }

    #[test]
    fn empty_and_full_arc() {
        for n in [1, 7, 64] {
            assert_abs_diff_eq!(cue_variance_oracle(n, 0.0).unwrap(), 0.0);
            assert_abs_diff_eq!(cue_variance_oracle(n, TAU).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert!(cue_variance_oracle(3, 7.0).is_err());
        assert!(cue_variance_oracle(0, 1.0).is_err());
    }

    #[test]
    fn single_point_is_bernoulli() {
        for i in 0..=50 {
            let arc = TAU * i as f64 / 50.0;
            let p = arc / TAU;
            assert_abs_diff_eq!(cue_variance_oracle(1, arc).unwrap(), p * (1.0 - p), epsilon = 1e-8);
        }
    }

    #[test]
    fn agrees_with_truncated_series() {
        for &(n, arc) in &[(3, 0.7), (16, 2.0), (64, 0.05), (64, 5.9)] {
            let terms = 2_000_000;
            let bound = 2.0 * n as f64 / (PI * PI * terms as f64);
            let direct = truncated(n, arc, terms);
            let closed = cue_variance_oracle(n, arc).unwrap();
            assert!(closed >= direct - 1e-12 && closed - direct <= bound + 1e-12, "n={n} arc={arc}");
        }
    }

    #[test]
    fn regression_value() {
        let v = cue_variance_oracle(64, TAU * 8.0 / 64.0).unwrap();
        assert_abs_diff_eq!(v, 0.5540551456882272, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_in_complementary_arcs() {
        for n in [5, 40] {
            for &arc in &[0.3, 1.1, 2.9] {
                let a = cue_variance_oracle(n, arc).unwrap();
                let b = cue_variance_oracle(n, TAU - arc).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }
}
