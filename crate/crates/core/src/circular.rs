//! Circular β Ensemble through its Verblunsky coefficients.
//!
//! A draw holds `n - 1` independent coefficients `γ_j` in the unit disc, with
//! `|γ_j|²` distributed as Beta(1, β(n-j-1)/2) and a uniform argument, plus an
//! independent uniform boundary phase `η`. The Prüfer phase
//!
//! ```text
//! ψ_0(θ, a)     = θ + a
//! ψ_{k+1}(θ, a) = ψ_k + θ + 2 Im log[(1 - γ_k) / (1 - γ_k e^{iψ_k})]
//! ```
//!
//! is continuous and strictly increasing in `θ`, and the eigenangles of the
//! ensemble are exactly the solutions of `ψ_{n-1}(θ) ≡ η (mod 2π)`. Counting
//! points in an arc therefore only needs one phase evaluation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::{beta_1s_unchecked, RngStream};

/// Absolute tolerance in θ used when locating eigenangles.
pub const POINT_TOLERANCE: f64 = 1e-12;

/// One realization of the circular ensemble in Verblunsky form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerblunskyDraw {
    beta: f64,
    n: usize,
    gamma: Vec<Complex64>,
    eta: f64,
    /// `arg(1 - γ_k)`, cached because every phase step needs it.
    #[serde(skip)]
    base_arg: Vec<f64>,
}

impl VerblunskyDraw {
    /// Build a draw from explicit coefficients. `n` is `gamma.len() + 1`.
    pub fn new(beta: f64, gamma: Vec<Complex64>, eta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(domain!("beta must be positive, got {beta}"));
        }
        if let Some((j, g)) = gamma.iter().enumerate().find(|(_, g)| !(g.norm_sqr() < 1.0)) {
            return Err(domain!("|gamma_{j}| = {} is not inside the unit disc", g.norm()));
        }
        if !(0.0..TAU).contains(&eta) {
            return Err(domain!("eta = {eta} is not in [0, 2pi)"));
        }
        let base_arg = gamma.iter().map(|g| (1.0 - g).arg()).collect();
        Ok(Self {
            beta,
            n: gamma.len() + 1,
            gamma,
            eta,
            base_arg,
        })
    }

    /// All coefficients zero: the eigenangles form the rotated lattice
    /// `(η + 2πm)/n`.
    pub fn lattice(beta: f64, n: usize, eta: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain!("n must be at least 1"));
        }
        Self::new(beta, vec![Complex64::new(0.0, 0.0); n - 1], eta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    #[inline]
    fn step(&self, k: usize, psi: f64, theta: f64) -> f64 {
        let g = self.gamma[k];
        let (s, c) = psi.sin_cos();
        // 1 - γ e^{iψ}; both it and 1 - γ have positive real part, so the
        // principal arguments subtract without wrapping.
        let re = 1.0 - (g.re * c - g.im * s);
        let im = -(g.re * s + g.im * c);
        psi + theta + 2.0 * (self.base_arg[k] - im.atan2(re))
    }

    /// `ψ_k(θ, a)` without bounds checking on `k`.
    #[inline]
    pub fn phase(&self, theta: f64, a: f64, k: usize) -> f64 {
        let mut psi = theta + a;
        for j in 0..k {
            psi = self.step(j, psi, theta);
        }
        psi
    }

    /// `ψ_{n-1}(θ)`, the phase whose level sets give the eigenangles.
    #[inline]
    pub fn terminal_phase(&self, theta: f64) -> f64 {
        self.phase(theta, 0.0, self.n - 1)
    }

    /// `ψ_{n-1}` at many angles at once. Iterates depth-major so the
    /// coefficient stays in registers across the batch.
    pub fn terminal_phases(&self, thetas: &[f64]) -> Vec<f64> {
        let mut psi = thetas.to_vec();
        for k in 0..self.n - 1 {
            for (p, &t) in psi.iter_mut().zip(thetas) {
                *p = self.step(k, *p, t);
            }
        }
        psi
    }

    /// Number of lattice values `η + 2πm` in `(0, psi]`.
    #[inline]
    pub fn lattice_hits(&self, psi: f64) -> u64 {
        // smallest m with η + 2πm > 0
        let first = if self.eta > 0.0 { 0i64 } else { 1 };
        let last = ((psi - self.eta) / TAU).floor() as i64;
        (last - first + 1).max(0) as u64
    }
}

/// Draw a circular β ensemble of size `n`.
pub fn sample_verblunsky(beta: f64, n: usize, rng: &mut RngStream) -> Result<VerblunskyDraw> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain!("beta must be positive, got {beta}"));
    }
    let gamma = (0..n - 1)
        .map(|j| {
            let s = 0.5 * beta * (n - j - 1) as f64;
            let radius = beta_1s_unchecked(s, rng).sqrt();
            let angle = TAU * rng.uniform();
            Complex64::from_polar(radius, angle)
        })
        .collect::<Vec<_>>();
    let eta = TAU * rng.uniform();
    VerblunskyDraw::new(beta, gamma, eta)
}

/// A Prüfer phase value, optionally with the whole path `ψ_0..ψ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruferEvaluation {
    pub theta: f64,
    pub offset: f64,
    pub depth: usize,
    pub psi: f64,
    pub trajectory: Option<Vec<f64>>,
}

pub fn prufer_evaluate(draw: &VerblunskyDraw, theta: f64, a: f64, k: usize) -> Result<PruferEvaluation> {
    check_depth(draw, k)?;
    Ok(PruferEvaluation {
        theta,
        offset: a,
        depth: k,
        psi: draw.phase(theta, a, k),
        trajectory: None,
    })
}

/// Same as [`prufer_evaluate`] but records every intermediate phase.
pub fn prufer_trajectory(draw: &VerblunskyDraw, theta: f64, a: f64, k: usize) -> Result<PruferEvaluation> {
    check_depth(draw, k)?;
    let mut path = Vec::with_capacity(k + 1);
    let mut psi = theta + a;
    path.push(psi);
    for j in 0..k {
        psi = draw.step(j, psi, theta);
        path.push(psi);
    }
    Ok(PruferEvaluation {
        theta,
        offset: a,
        depth: k,
        psi,
        trajectory: Some(path),
    })
}

fn check_depth(draw: &VerblunskyDraw, k: usize) -> Result<()> {
    if k >= draw.n {
        return Err(domain!("depth {k} out of range 0..={}", draw.n - 1));
    }
    Ok(())
}

/// Number of rescaled eigenangles `z ∈ (0, x]`, i.e. points `e^{iz/n}` on the
/// arc from 1 to `e^{ix/n}`. Requires `0 <= x < 2πn`.
pub fn count_arc(draw: &VerblunskyDraw, x: f64) -> Result<u64> {
    let n = draw.n as f64;
    if !(0.0..TAU * n).contains(&x) {
        return Err(domain!("arc parameter x = {x} outside [0, 2pi n)"));
    }
    if x == 0.0 {
        return Ok(0);
    }
    Ok(draw.lattice_hits(draw.terminal_phase(x / n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointScale {
    /// Raw eigenangles in `[0, 2π)`.
    Angle,
    /// Eigenangles multiplied by `n`.
    Rescaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<f64>,
    pub scale: PointScale,
}

impl PointConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in `(lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        let a = self.points.partition_point(|&p| p <= lo);
        let b = self.points.partition_point(|&p| p <= hi);
        b.saturating_sub(a)
    }
}

/// Solve `ψ_{n-1}(θ) = target` for every target in `targets` (sorted, all in
/// `[ψ(lo), ψ(hi)]`), sharing phase evaluations between nearby targets.
fn solve_levels(draw: &VerblunskyDraw, lo: f64, hi: f64, targets: &[f64], out: &mut Vec<f64>) {
    if targets.is_empty() {
        return;
    }
    if hi - lo <= POINT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        out.extend(std::iter::repeat_n(mid, targets.len()));
        return;
    }
    let mid = 0.5 * (lo + hi);
    if mid <= lo || mid >= hi {
        out.extend(std::iter::repeat_n(mid, targets.len()));
        return;
    }
    let psi_mid = draw.terminal_phase(mid);
    let split = targets.partition_point(|&t| t <= psi_mid);
    solve_levels(draw, lo, mid, &targets[..split], out);
    solve_levels(draw, mid, hi, &targets[split..], out);
}

/// All `n` eigenangles in `[0, 2π)`, each located by bisection to
/// [`POINT_TOLERANCE`].
pub fn cbe_points(draw: &VerblunskyDraw) -> PointConfiguration {
    let targets: Vec<f64> = (0..draw.n).map(|m| draw.eta + TAU * m as f64).collect();
    let mut points = Vec::with_capacity(draw.n);
    solve_levels(draw, 0.0, TAU, &targets, &mut points);
    PointConfiguration {
        points,
        scale: PointScale::Angle,
    }
}

/// Rescaled eigenangles `n θ_j` that fall in `[0, x_max]`.
pub fn window_points(draw: &VerblunskyDraw, x_max: f64) -> Result<PointConfiguration> {
    let n = draw.n as f64;
    if !(0.0..TAU * n).contains(&x_max) {
        return Err(domain!("window x_max = {x_max} outside [0, 2pi n)"));
    }
    let theta_max = x_max / n;
    let psi_max = draw.terminal_phase(theta_max);
    let targets: Vec<f64> = (0..)
        .map(|m| draw.eta + TAU * m as f64)
        .take_while(|&t| t <= psi_max)
        .collect();
    let mut points = Vec::with_capacity(targets.len());
    solve_levels(draw, 0.0, theta_max, &targets, &mut points);
    for p in &mut points {
        *p = (*p * n).clamp(0.0, x_max);
    }
    Ok(PointConfiguration {
        points,
        scale: PointScale::Rescaled,
    })
}

/// Size of the circular ensemble used to approximate Sine_β on `[0, x_max]`
/// when the caller does not choose one.
pub fn default_sine_n(x_max: f64) -> usize {
    4096usize.max((50.0 * x_max).ceil() as usize)
}

fn check_sine_size(x_max: f64, n: usize) -> Result<()> {
    if !(x_max >= 0.0) || !x_max.is_finite() {
        return Err(domain!("window length must be finite and non-negative, got {x_max}"));
    }
    let needed = (10.0 * x_max).ceil() as usize;
    if n < needed.max(1) {
        return Err(domain!("n = {n} too small for window {x_max}; need n >= {needed}"));
    }
    Ok(())
}

/// Approximate Sine_β sample on `[0, x_max]`: a circular ensemble of size
/// `n` with its eigenangles multiplied by `n`.
pub fn sine_beta_window(beta: f64, x_max: f64, n: usize, rng: &mut RngStream) -> Result<PointConfiguration> {
    check_sine_size(x_max, n)?;
    let draw = sample_verblunsky(beta, n, rng)?;
    window_points(&draw, x_max)
}

/// Count of an approximate Sine_β sample in `(0, x]`.
pub fn sine_beta_count(beta: f64, x: f64, n: usize, rng: &mut RngStream) -> Result<u64> {
    check_sine_size(x, n)?;
    let draw = sample_verblunsky(beta, n, rng)?;
    count_arc(&draw, x)
}

/// `sup_x |N(0, x] - x/2π| / (1 + x)^α` over the supplied grid of `x` values
/// (rescaled units), for one draw.
pub fn normalized_deviation_sup(draw: &VerblunskyDraw, grid: &[f64], alpha: f64) -> Result<f64> {
    let n = draw.n as f64;
    if let Some(&x) = grid.iter().find(|&&x| !(0.0..TAU * n).contains(&x)) {
        return Err(domain!("grid value {x} outside [0, 2pi n)"));
    }
    let thetas: Vec<f64> = grid.iter().map(|x| x / n).collect();
    let phases = draw.terminal_phases(&thetas);
    Ok(grid
        .iter()
        .zip(&phases)
        .map(|(&x, &psi)| {
            let count = if x == 0.0 { 0 } else { draw.lattice_hits(psi) };
            (count as f64 - x / TAU).abs() / (1.0 + x).powf(alpha)
        })
        .fold(0.0, f64::max))
}

impl From<&VerblunskyDraw> for PointConfiguration {
    fn from(draw: &VerblunskyDraw) -> Self {
        cbe_points(draw)
    }
}
