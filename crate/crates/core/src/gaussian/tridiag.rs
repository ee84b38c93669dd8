use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{chi_unchecked, RngStream};

/// Symmetric tridiagonal matrix whose spectrum is a Gaussian β ensemble.
///
/// Diagonal entries are `N(0, 2/β)`; the entry above the diagonal in row `p`
/// (0-based) is `χ_{β(n-p-1)}/√β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalModel {
    pub beta: f64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalModel {
    pub fn new(beta: f64, diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(domain!("matrix must have at least one row"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(domain!(
                "expected {} off-diagonal entries, got {}",
                diag.len() - 1,
                offdiag.len()
            ));
        }
        Ok(Self { beta, diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues `<= lambda`, from the signs of the LDLᵀ pivots
    /// of `T - lambda I`. A zero pivot is nudged to `-ε(1 + |lambda|)` so that
    /// an eigenvalue sitting exactly at `lambda` is counted.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let tiny = -f64::EPSILON * (1.0 + lambda.abs());
        let mut count = 0;
        let mut pivot = 1.0;
        for (p, &a) in self.diag.iter().enumerate() {
            let coupling = if p == 0 {
                0.0
            } else {
                let b = self.offdiag[p - 1];
                b * b / pivot
            };
            pivot = (a - lambda) - coupling;
            if pivot == 0.0 {
                pivot = tiny;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `T + c I`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            beta: self.beta,
            diag: self.diag.iter().map(|d| d + c).collect(),
            offdiag: self.offdiag.clone(),
        }
    }

    /// Interval containing the whole spectrum (Gershgorin).
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in 0..n {
            let left = if p > 0 { self.offdiag[p - 1].abs() } else { 0.0 };
            let right = if p + 1 < n { self.offdiag[p].abs() } else { 0.0 };
            lo = lo.min(self.diag[p] - left - right);
            hi = hi.max(self.diag[p] + left + right);
        }
        (lo, hi)
    }

    /// Eigenvalues in increasing order, each located by bisection on the
    /// Sturm count to absolute accuracy `tol`.
    pub fn eigenvalues(&self, tol: f64) -> Vec<f64> {
        let (lo, hi) = self.spectral_bounds();
        let tol = tol.max(4.0 * f64::EPSILON * lo.abs().max(hi.abs()));
        (1..=self.n())
            .map(|k| {
                let (mut a, mut b) = (lo - tol, hi + tol);
                while b - a > tol {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.sturm_count(mid) >= k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

pub fn sample_tridiagonal(beta: f64, n: usize, rng: &mut RngStream) -> Result<TridiagonalModel> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain!("beta must be positive, got {beta}"));
    }
    let sd = (2.0 / beta).sqrt();
    let scale = beta.sqrt().recip();
    let diag = (0..n)
        .map(|_| crate::rng::gaussian_sample(0.0, sd, rng))
        .collect::<Result<Vec<_>>>()?;
    let offdiag = (0..n - 1)
        .map(|p| chi_unchecked(beta * (n - p - 1) as f64, rng) * scale)
        .collect();
    TridiagonalModel::new(beta, diag, offdiag)
}

pub fn sturm_count(model: &TridiagonalModel, lambda: f64) -> usize {
    model.sturm_count(lambda)
}

/// `√(n - p - 1/2)`.
pub fn carousel_scale(n: usize, p: usize) -> f64 {
    (n as f64 - p as f64 - 0.5).sqrt()
}

/// Non-symmetric tridiagonal matrix similar to a [`TridiagonalModel`]:
/// diagonal `X_p`, entry below the diagonal in row `p` equal to `s_p`, entry
/// above the diagonal in row `p` equal to `s_p + Y_p`, with
/// `s_p = √(n - p - 1/2)`.
///
/// Similarity only fixes the products of symmetric off-diagonal pairs,
/// `(s_p + Y_p) s_{p+1} = b_p²`, which determines `Y_p` for `p < n - 1`.
/// The last row has no entry above the diagonal; `Y_{n-1}` is taken to be 0,
/// which only rescales the final transfer step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatedModel {
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ConjugatedModel {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `Y_ell`, with the convention `Y_{n-1} = 0`.
    #[inline]
    pub fn y_at(&self, ell: usize) -> f64 {
        self.y.get(ell).copied().unwrap_or(0.0)
    }

    /// Entries `(diag, super, sub)` of the non-symmetric matrix, `super[p]`
    /// at `(p, p+1)` and `sub[p]` at `(p+1, p)`.
    pub fn entries(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.n();
        let sup = (0..n.saturating_sub(1)).map(|p| self.s[p] + self.y[p]).collect();
        let sub = (1..n).map(|p| self.s[p]).collect();
        (self.x.clone(), sup, sub)
    }
}

pub fn conjugate_model(model: &TridiagonalModel) -> Result<ConjugatedModel> {
    let n = model.n();
    if let Some(p) = model.offdiag.iter().position(|&b| !(b > 0.0)) {
        return Err(Error::Degenerate(format!("off-diagonal entry {p} is {}", model.offdiag[p])));
    }
    let s: Vec<f64> = (0..n).map(|p| carousel_scale(n, p)).collect();
    let y = model
        .offdiag
        .iter()
        .enumerate()
        .map(|(p, &b)| b * b / s[p + 1] - s[p])
        .collect();
    Ok(ConjugatedModel {
        s,
        x: model.diag.clone(),
        y,
    })
}
