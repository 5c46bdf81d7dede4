//! Extreme points of the sign-patterned family hull, convex combinations,
//! and the weight decomposition that inverts them.
//!
//! The hull is spanned by single-coefficient boundary functions: `h_1 = z`,
//! `h_k = z - (1-alpha)/gamma_k z^k`, and
//! `g_k = z + (-1)^{m+i-1} (1-alpha)/phi_k conj(z)^k`. Every hull element
//! is a convex combination of these, and membership weights are read back
//! from the coefficient functional.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::family::FamilySpec;
use crate::series::HarmonicFunction;

/// Tolerance on weight-vector normalization.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ExtremalError {
    /// Weights negative or not summing to 1.
    InvalidWeights { reason: String },
    /// Decomposition requires an exact sign-patterned member.
    NotMember,
}

impl fmt::Display for ExtremalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalError::InvalidWeights { reason } => write!(f, "invalid weight vector: {reason}"),
            ExtremalError::NotMember => {
                write!(f, "function is not a sign-patterned member of the family")
            }
        }
    }
}

impl std::error::Error for ExtremalError {}

/// Convex-combination weights over the extreme points: `x[k-1]` weights
/// `h_k` and `y[k-1]` weights `g_k`, both indexed from k = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Vec<f64>,
}

impl WeightVector {
    pub fn validate(&self) -> Result<(), ExtremalError> {
        if let Some(w) = self.x.iter().chain(&self.y).find(|w| !w.is_finite() || **w < 0.0) {
            return Err(ExtremalError::InvalidWeights {
                reason: format!("weight {w} is negative or non-finite"),
            });
        }
        let total: f64 = self.x.iter().chain(&self.y).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(ExtremalError::InvalidWeights {
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        Ok(())
    }

    pub fn x_at(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.x.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn y_at(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.y.get(k - 1).copied().unwrap_or(0.0)
        }
    }
}

/// Analytic extreme point `h_k`: the identity for k = 1, else the
/// single-coefficient boundary function with `a_k = -(1-alpha)/gamma_k`.
pub fn extreme_h(spec: &FamilySpec, k: usize) -> HarmonicFunction {
    debug_assert!(k >= 1 && k <= spec.trunc);
    if k == 1 {
        return HarmonicFunction::identity(spec.trunc);
    }
    let mut a = vec![Complex64::new(0.0, 0.0); spec.trunc - 1];
    a[k - 2] = Complex64::new(-(1.0 - spec.alpha) / spec.gamma(k as u32), 0.0);
    HarmonicFunction::from_parts(a, Vec::new(), spec.trunc)
}

/// Co-analytic extreme point `g_k` with
/// `b_k = (-1)^{m+i-1} (1-alpha)/phi_k`. For k = 1 this may sit on the
/// boundary `|b_1| = 1`; it is still emitted as a hull element and
/// callers surface a non-univalence warning.
pub fn extreme_g(spec: &FamilySpec, k: usize) -> HarmonicFunction {
    debug_assert!(k >= 1 && k <= spec.trunc);
    let sign = co_analytic_sign(spec);
    let mut b = vec![Complex64::new(0.0, 0.0); spec.trunc];
    b[k - 1] = Complex64::new(sign * (1.0 - spec.alpha) / spec.phi(k as u32), 0.0);
    HarmonicFunction::from_parts(Vec::new(), b, spec.trunc)
}

/// `(-1)^{m+i-1}`, the sign carried by every co-analytic coefficient of a
/// sign-patterned member.
pub fn co_analytic_sign(spec: &FamilySpec) -> f64 {
    if (spec.m as i64 + spec.i as i64 - 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The convex combination `sum x_k h_k + sum y_k g_k`. Its coefficient
/// functional equals `1 - x_1`, so every valid weight vector lands inside
/// the family.
pub fn combine(spec: &FamilySpec, w: &WeightVector) -> Result<HarmonicFunction, ExtremalError> {
    w.validate()?;
    let n = spec.trunc;
    let scale = 1.0 - spec.alpha;
    let sign = co_analytic_sign(spec);
    let mut a = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for k in 2..=n {
        let xk = w.x_at(k);
        if xk != 0.0 {
            a[k - 2] = Complex64::new(-xk * scale / spec.gamma(k as u32), 0.0);
        }
    }
    for k in 1..=n {
        let yk = w.y_at(k);
        if yk != 0.0 {
            b[k - 1] = Complex64::new(sign * yk * scale / spec.phi(k as u32), 0.0);
        }
    }
    Ok(HarmonicFunction::from_parts(a, b, n))
}

/// Recover hull weights from a sign-patterned member:
/// `x_k = gamma_k |a_k| / (1-alpha)`, `y_k = phi_k |b_k| / (1-alpha)`,
/// with the residual mass assigned to `x_1`.
pub fn decompose(f: &HarmonicFunction, spec: &FamilySpec) -> Result<WeightVector, ExtremalError> {
    if !spec.is_member_t(f) {
        return Err(ExtremalError::NotMember);
    }
    let n = spec.trunc.max(f.truncation());
    let scale = 1.0 - spec.alpha;
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    for k in 2..=n {
        x[k - 1] = spec.gamma(k as u32) * f.a_coeff(k).norm() / scale;
    }
    for k in 1..=n {
        y[k - 1] = spec.phi(k as u32) * f.b_coeff(k).norm() / scale;
    }
    let rest: f64 = x.iter().skip(1).sum::<f64>() + y.iter().sum::<f64>();
    x[0] = (1.0 - rest).max(0.0);
    Ok(WeightVector { x, y })
}
