//! Eigenvalue counting by lifted transfer maps.
//!
//! For an eigenvector `u` of the conjugated model, the ratios
//! `r_ell = u_ell / u_{ell-1}` obey `r_{ell+1} = r_ell · R_{ell,Λ}` with
//!
//! ```text
//! R_{ell,Λ} = Q(π) A(1, Λ/s_ell) W_ell,   W_ell = A((1 + Y_ell/s_ell)⁻¹, -X_ell/s_ell)
//! ```
//!
//! starting from `r_0 = ∞` and ending at `r_n = 0` exactly when `Λ` is an
//! eigenvalue. Lifting to the real line, the forward phase starts at `π`,
//! the backward phase at `0`, and the number of eigenvalues `<= Λ` is the
//! integer part of their difference over `2π`, whatever the split index.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::carousel::{carousel_params, CarouselParams};
use super::tridiag::ConjugatedModel;
use crate::error::{domain, Error, Result};
use crate::lift::{CircleMove, LiftedCircleMap, Phase};

/// Distance to the nearest integer below which a count is reported as
/// ill-conditioned.
pub const NEAR_DEGENERATE: f64 = 1e-8;

fn disorder_move(model: &ConjugatedModel, ell: usize) -> Result<CircleMove> {
    let s = model.s[ell];
    let ratio = 1.0 + model.y_at(ell) / s;
    if !(ratio > 0.0) {
        return Err(Error::Degenerate(format!("1 + Y/s = {ratio} at row {ell}")));
    }
    Ok(CircleMove::Affine {
        scale: ratio.recip(),
        shift: -model.x[ell] / s,
    })
}

#[inline]
fn transfer_moves(model: &ConjugatedModel, ell: usize, lambda: f64) -> Result<[CircleMove; 3]> {
    Ok([
        CircleMove::Rotate(PI),
        CircleMove::Affine {
            scale: 1.0,
            shift: lambda / model.s[ell],
        },
        disorder_move(model, ell)?,
    ])
}

/// `W_ell`.
pub fn build_w(model: &ConjugatedModel, ell: usize) -> Result<LiftedCircleMap> {
    check_row(model, ell)?;
    Ok(LiftedCircleMap::from_moves([disorder_move(model, ell)?]))
}

/// `R_{ell,Λ} = Q(π) A(1, Λ/s_ell) W_ell`.
pub fn build_r(ell: usize, lambda: f64, model: &ConjugatedModel) -> Result<LiftedCircleMap> {
    check_row(model, ell)?;
    Ok(LiftedCircleMap::from_moves(transfer_moves(model, ell, lambda)?))
}

fn check_row(model: &ConjugatedModel, ell: usize) -> Result<()> {
    if ell >= model.n() {
        return Err(domain!("row {ell} out of range 0..{}", model.n()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSweep {
    pub ell: usize,
    pub lambda: f64,
    pub forward: Phase,
    pub backward: Phase,
    /// Number of eigenvalues in `(-∞, Λ]`.
    pub count: usize,
    /// Set when `(φ̂ - φ̂⊙)/2π` is within [`NEAR_DEGENERATE`] of an integer,
    /// i.e. `Λ` is numerically on top of an eigenvalue.
    pub ill_conditioned: bool,
}

impl PhaseSweep {
    pub fn phi_fwd(&self) -> f64 {
        self.forward.value()
    }

    pub fn phi_bwd(&self) -> f64 {
        self.backward.value()
    }
}

/// `φ̂_{ell,Λ} = π ∗ R_0 R_1 ⋯ R_{ell-1}`.
pub fn forward_phase(model: &ConjugatedModel, lambda: f64, ell: usize) -> Result<Phase> {
    if ell > model.n() {
        return Err(domain!("split index {ell} exceeds n = {}", model.n()));
    }
    let mut phase = Phase::HALF_TURN;
    for row in 0..ell {
        for mv in transfer_moves(model, row, lambda)? {
            phase = mv.act(phase);
        }
    }
    Ok(phase)
}

/// `φ̂⊙_{ell,Λ} = 0 ∗ R_{n-1}⁻¹ R_{n-2}⁻¹ ⋯ R_ell⁻¹`.
pub fn backward_phase(model: &ConjugatedModel, lambda: f64, ell: usize) -> Result<Phase> {
    if ell > model.n() {
        return Err(domain!("split index {ell} exceeds n = {}", model.n()));
    }
    let mut phase = Phase::ZERO;
    for row in (ell..model.n()).rev() {
        for mv in transfer_moves(model, row, lambda)?.iter().rev() {
            phase = mv.inverse().act(phase);
        }
    }
    Ok(phase)
}

pub fn phase_sweep(model: &ConjugatedModel, lambda: f64, ell: usize) -> Result<PhaseSweep> {
    if !lambda.is_finite() {
        return Err(domain!("spectral parameter must be finite, got {lambda}"));
    }
    let forward = forward_phase(model, lambda, ell)?;
    let backward = backward_phase(model, lambda, ell)?;
    let windings = forward.turns_between(backward);
    let whole = windings.floor();
    let frac = windings - whole;
    Ok(PhaseSweep {
        ell,
        lambda,
        forward,
        backward,
        count: whole.max(0.0) as usize,
        ill_conditioned: frac < NEAR_DEGENERATE || 1.0 - frac < NEAR_DEGENERATE,
    })
}

/// `A(Im(ρ)⁻¹, -Re(ρ))`, which sends the fixed point `ρ` of the
/// deterministic rotation to `i`.
fn carousel_frame(params: &CarouselParams, ell: usize) -> CircleMove {
    let rho = params.rho[ell];
    CircleMove::Affine {
        scale: rho.im.recip(),
        shift: -rho.re,
    }
}

/// `φ_{ell,Λ,μ} = φ̂_{ell,Λ} ∗ A(Im(ρ_ell)⁻¹, -Re(ρ_ell)) - 2 Σ_{j<ell} (π - Arg ρ_j)`.
///
/// The `2π` in each summand matters: the deterministic part of each
/// transfer step is a rotation by `2π - 2 Arg ρ_j ∈ (0, 2π)`, not by
/// `-2 Arg ρ_j`.
pub fn relative_phase(model: &ConjugatedModel, lambda: f64, mu: f64, ell: usize) -> Result<f64> {
    let params = carousel_params(mu, model.n())?;
    relative_phase_with(model, &params, lambda, ell)
}

pub fn relative_phase_with(model: &ConjugatedModel, params: &CarouselParams, lambda: f64, ell: usize) -> Result<f64> {
    if ell >= params.rho.len() {
        return Err(domain!("split index {ell} must be below n0 = {}", params.n0));
    }
    let hat = forward_phase(model, lambda, ell)?;
    let framed = carousel_frame(params, ell).act(hat);
    Ok(framed.value() - 2.0 * (PI * ell as f64 - params.arg_sum(ell)))
}

/// `S_{ell,Λ,μ} = A⁻¹(Im(ρ_ell)⁻¹, -Re(ρ_ell)) A(1, (Λ-μ)/s_ell) W_ell A(Im(ρ_{ell+1})⁻¹, -Re(ρ_{ell+1}))`,
/// the random part of one carousel step seen in the rotating frame.
pub fn carousel_step_map(model: &ConjugatedModel, params: &CarouselParams, lambda: f64, ell: usize) -> Result<LiftedCircleMap> {
    if ell + 1 >= params.rho.len() {
        return Err(domain!("step {ell} needs ell + 1 < n0 = {}", params.n0));
    }
    Ok(LiftedCircleMap::from_moves([
        carousel_frame(params, ell).inverse(),
        CircleMove::Affine {
            scale: 1.0,
            shift: (lambda - params.mu) / model.s[ell],
        },
        disorder_move(model, ell)?,
        carousel_frame(params, ell + 1),
    ]))
}

/// Full windings `(φ̂ - φ̂⊙)/2π` as a real number.
pub fn winding_number(sweep: &PhaseSweep) -> f64 {
    sweep.forward.turns_between(sweep.backward)
}
