//! Lifts of circle homeomorphisms to the real line.
//!
//! The projective line is identified with the unit circle by the Cayley
//! transform `x ↦ (i - x)/(i + x)`, under which the real coordinate
//! `tan(φ/2)` corresponds to the angle `φ`. Two kinds of moves generate
//! everything the phase sweeps need:
//!
//! * a rotation `Q(θ)`, lifted as `φ ↦ φ + θ`;
//! * an affine move `A(a, b)`: `x ↦ a(x + b)` on the projective line, lifted
//!   as the unique increasing map of the real line that fixes `π`.
//!
//! Maps compose left to right: `(Q(π), A(1, c))` applies `Q(π)` first.
//!
//! Phases are carried as an integer number of turns plus an angle in
//! `(-π, π]`. Affine moves never change the turn count, so windings are
//! tracked exactly no matter how long the composition.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `2π · turns + angle` with `angle ∈ (-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    turns: i64,
    angle: f64,
}

impl Phase {
    pub const ZERO: Phase = Phase { turns: 0, angle: 0.0 };
    pub const HALF_TURN: Phase = Phase { turns: 0, angle: PI };

    pub fn from_value(x: f64) -> Self {
        Self::ZERO.shifted(x)
    }

    pub fn turns(self) -> i64 {
        self.turns
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn value(self) -> f64 {
        TAU * self.turns as f64 + self.angle
    }

    /// `self + delta`, renormalized.
    #[inline]
    pub fn shifted(self, delta: f64) -> Self {
        let raw = self.angle + delta;
        let mut k = ((raw - PI) / TAU).ceil();
        let mut angle = raw - TAU * k;
        // rounding can leave the angle a hair outside (-π, π]
        if angle > PI {
            angle -= TAU;
            k += 1.0;
        } else if angle <= -PI {
            angle += TAU;
            k -= 1.0;
        }
        Phase {
            turns: self.turns + k as i64,
            angle,
        }
    }

    /// `(self - other) / 2π`, computed with the integer parts separated.
    pub fn turns_between(self, other: Phase) -> f64 {
        (self.turns - other.turns) as f64 + (self.angle - other.angle) / TAU
    }
}

/// A generator of the lifted action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CircleMove {
    /// `Q(θ)`.
    Rotate(f64),
    /// `A(scale, shift)`: `x ↦ scale · (x + shift)`, `scale > 0`.
    Affine { scale: f64, shift: f64 },
}

impl CircleMove {
    pub fn affine(scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !shift.is_finite() {
            return Err(domain!("affine move needs finite scale > 0 and finite shift, got ({scale}, {shift})"));
        }
        Ok(CircleMove::Affine { scale, shift })
    }

    #[inline]
    pub fn act(&self, p: Phase) -> Phase {
        match *self {
            CircleMove::Rotate(theta) => p.shifted(theta),
            CircleMove::Affine { scale, shift } => Phase {
                turns: p.turns,
                angle: affine_on_angle(p.angle, scale, shift),
            },
        }
    }

    /// `A(a, b)⁻¹ = A(1/a, -ab)`, `Q(θ)⁻¹ = Q(-θ)`.
    pub fn inverse(&self) -> Self {
        match *self {
            CircleMove::Rotate(theta) => CircleMove::Rotate(-theta),
            CircleMove::Affine { scale, shift } => CircleMove::Affine {
                scale: 1.0 / scale,
                shift: -scale * shift,
            },
        }
    }

    /// Action on the projective line; `f64::INFINITY` stands for `∞`.
    pub fn act_projective(&self, x: f64) -> f64 {
        match *self {
            CircleMove::Rotate(theta) => {
                let (s, c) = (0.5 * theta).sin_cos();
                if x.is_infinite() {
                    return if s == 0.0 { f64::INFINITY } else { c / -s };
                }
                let den = -x * s + c;
                if den == 0.0 {
                    f64::INFINITY
                } else {
                    (x * c + s) / den
                }
            }
            CircleMove::Affine { scale, shift } => {
                if x.is_infinite() {
                    f64::INFINITY
                } else {
                    scale * (x + shift)
                }
            }
        }
    }
}

#[inline]
fn affine_on_angle(angle: f64, scale: f64, shift: f64) -> f64 {
    if angle == PI {
        return PI;
    }
    2.0 * (scale * ((0.5 * angle).tan() + shift)).atan()
}

/// The lifted affine move `A(a, b)` applied to a real number.
pub fn lifted_a(x: f64, a: f64, b: f64) -> Result<f64> {
    let mv = CircleMove::affine(a, b)?;
    Ok(mv.act(Phase::from_value(x)).value())
}

/// Cayley transform of a point of the projective line.
pub fn cayley(x: f64) -> Complex64 {
    if x.is_infinite() {
        return Complex64::new(-1.0, 0.0);
    }
    let i = Complex64::i();
    (i - x) / (i + x)
}

/// A finite composition of moves, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LiftedCircleMap {
    moves: Vec<CircleMove>,
}

impl LiftedCircleMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_moves(moves: impl IntoIterator<Item = CircleMove>) -> Self {
        Self {
            moves: moves.into_iter().collect(),
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Self::from_moves([CircleMove::Rotate(theta)])
    }

    pub fn affine(scale: f64, shift: f64) -> Result<Self> {
        Ok(Self::from_moves([CircleMove::affine(scale, shift)?]))
    }

    pub fn moves(&self) -> &[CircleMove] {
        &self.moves
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &LiftedCircleMap) -> Self {
        self.moves.extend_from_slice(&next.moves);
        self
    }

    pub fn inverse(&self) -> Self {
        Self {
            moves: self.moves.iter().rev().map(CircleMove::inverse).collect(),
        }
    }

    pub fn apply(&self, p: Phase) -> Phase {
        self.moves.iter().fold(p, |p, m| m.act(p))
    }

    pub fn apply_value(&self, x: f64) -> f64 {
        self.apply(Phase::from_value(x)).value()
    }

    pub fn apply_projective(&self, x: f64) -> f64 {
        self.moves.iter().fold(x, |x, m| m.act_projective(x))
    }
}

/// `ash(S, e^{ix}, e^{iy}) = (y∗S - x∗S) - (y - x)`: how far `S` is from a
/// rigid rotation between the two points.
pub fn angular_shift(map: &LiftedCircleMap, x: f64, y: f64) -> f64 {
    let sx = map.apply(Phase::from_value(x));
    let sy = map.apply(Phase::from_value(y));
    TAU * sy.turns_between(sx) - (y - x)
}
