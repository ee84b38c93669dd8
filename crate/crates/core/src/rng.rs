//! Deterministic, splittable random streams and the handful of distributions
//! the ensembles are built from.
//!
//! A stream is identified by `(master_seed, stream_index)`. Both numbers are
//! pushed through a SplitMix64 finalizer to produce the 256-bit key of a
//! ChaCha8 generator, so replica `i` of a Monte Carlo run always sees the same
//! numbers no matter which thread evaluates it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{domain, Result};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combine a seed and an index into a new 64-bit value. Used to carve
/// sub-streams (row, replica, purpose) out of a single master seed.
#[inline]
pub fn combine(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut state = combine(master_seed, stream_index);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        Self {
            master_seed,
            stream_index,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform draw on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform draw on `(0, 1]`; safe to feed into `ln`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.inner.random::<f64>()
    }

    /// Uniform index in `0..len`.
    #[inline]
    pub fn index(&mut self, len: usize) -> usize {
        self.inner.random_range(0..len)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Draw from `N(mean, sd²)`. `sd = 0` returns `mean` without consuming randomness.
pub fn gaussian_sample(mean: f64, sd: f64, rng: &mut RngStream) -> Result<f64> {
    if !(sd >= 0.0) || !mean.is_finite() || !sd.is_finite() {
        return Err(domain!("gaussian needs finite mean and sd >= 0, got ({mean}, {sd})"));
    }
    if sd == 0.0 {
        return Ok(mean);
    }
    let z: f64 = StandardNormal.sample(rng);
    Ok(mean + sd * z)
}

/// Chi variable with `u` (possibly fractional) degrees of freedom, i.e. the
/// square root of a Gamma(u/2, scale 2) draw.
pub fn chi_sample(u: f64, rng: &mut RngStream) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain!("chi degrees of freedom must be positive, got {u}"));
    }
    Ok(chi_unchecked(u, rng))
}

#[inline]
pub(crate) fn chi_unchecked(u: f64, rng: &mut RngStream) -> f64 {
    // Marsaglia-Tsang, with the U^(1/shape) boost below shape 1.
    let gamma = Gamma::new(0.5 * u, 2.0).expect("positive shape");
    gamma.sample(rng).sqrt()
}

/// Beta(1, s) by inversion: `1 - U^(1/s)`.
pub fn beta_1s_sample(s: f64, rng: &mut RngStream) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain!("Beta(1, s) needs s > 0, got {s}"));
    }
    Ok(beta_1s_unchecked(s, rng))
}

#[inline]
pub(crate) fn beta_1s_unchecked(s: f64, rng: &mut RngStream) -> f64 {
    // -expm1(ln U / s) keeps precision when s is large and U^(1/s) ~ 1.
    let u = rng.uniform_open0();
    -(u.ln() / s).exp_m1()
}
