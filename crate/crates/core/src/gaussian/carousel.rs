//! Deterministic carousel parameters and the semicircle counting function.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarouselParams {
    pub mu: f64,
    pub n: usize,
    /// `n_0(μ) = (n - μ²/4 - 1/2) ∨ 1`.
    pub n0: f64,
    /// `ρ_ell(μ)` for every integer `0 <= ell < n_0`.
    pub rho: Vec<Complex64>,
    /// Split index: the positive part of the largest integer strictly below
    /// `n_0 - μ^{2/3}`.
    pub ell: usize,
    /// `arg_prefix[k] = Σ_{j<k} Arg ρ_j`, length `rho.len() + 1`.
    pub arg_prefix: Vec<f64>,
}

impl CarouselParams {
    /// `Σ_{j<k} Arg ρ_j`.
    pub fn arg_sum(&self, k: usize) -> f64 {
        self.arg_prefix[k]
    }

    /// `η_ell = Π_{j<=ell} ρ_j²`, evaluated through the angle sum so it stays
    /// on the unit circle.
    pub fn eta(&self, ell: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * self.arg_prefix[ell + 1])
    }

    /// `λ = 2√n_0 (Λ - μ)`.
    pub fn lambda_rel(&self, lambda: f64) -> f64 {
        2.0 * self.n0.sqrt() * (lambda - self.mu)
    }
}

/// Largest integer strictly below `x`.
pub fn strict_integer_part(x: f64) -> i64 {
    x.ceil() as i64 - 1
}

pub fn carousel_params(mu: f64, n: usize) -> Result<CarouselParams> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(domain!("mu must be finite and non-negative, got {mu}"));
    }
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    let q = 0.25 * mu * mu;
    let n0 = (n as f64 - q - 0.5).max(1.0);
    let len = n0.ceil() as usize;
    let rho: Vec<Complex64> = (0..len)
        .map(|l| {
            let rest = n0 - l as f64;
            let total = q + rest;
            Complex64::new((q / total).sqrt(), (rest / total).sqrt())
        })
        .collect();
    let mut arg_prefix = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    arg_prefix.push(acc);
    for r in &rho {
        acc += r.im.atan2(r.re);
        arg_prefix.push(acc);
    }
    let ell = strict_integer_part(n0 - mu.powf(2.0 / 3.0)).max(0) as usize;
    Ok(CarouselParams {
        mu,
        n,
        n0,
        rho,
        ell,
        arg_prefix,
    })
}

/// Antiderivative of `√(4 - x²)` on `[-2, 2]`.
fn semicircle_primitive(x: f64) -> f64 {
    let x = x.clamp(-2.0, 2.0);
    0.5 * x * (4.0 - x * x).max(0.0).sqrt() + 2.0 * (0.5 * x).asin()
}

/// `Σ_{j<ell} Arg ρ_j - (n/2) ∫_{(μ/√n) ∧ 2}^{2} √(4 - x²) dx` at the
/// carousel split index. Stays bounded in `n`.
pub fn semicircle_residual(mu: f64, n: usize) -> Result<f64> {
    let params = carousel_params(mu, n)?;
    let lower = (mu / (n as f64).sqrt()).min(2.0);
    let integral = semicircle_primitive(2.0) - semicircle_primitive(lower);
    Ok(params.arg_sum(params.ell) - 0.5 * n as f64 * integral)
}

/// `N_sc(Λ1, Λ2) = (n/2π) ∫_{Λ1/√n}^{Λ2/√n} √((4 - x²)_+) dx`; infinite
/// endpoints are allowed.
pub fn semicircle_count(n: usize, lo: f64, hi: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(domain!("need lo <= hi, got ({lo}, {hi})"));
    }
    let root = (n as f64).sqrt();
    let a = semicircle_primitive(lo / root);
    let b = semicircle_primitive(hi / root);
    Ok(n as f64 / (2.0 * PI) * (b - a))
}
