//! Closed-form bounds for sign-patterned members: sharp coefficient
//! bounds, the two-sided distortion envelope, the covering radius, and the
//! radius of convexity.
//!
//! The distortion and covering formulas ship in two variants because the
//! source statement and its derivation disagree on the divisor of the
//! `|b_1|` correction term (`beta` versus `1 - alpha`). The derivation
//! supports the `1 - alpha` form, so [`DistortionMode::Proof`] is the
//! default; both are exposed and never silently merged.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::family::FamilySpec;

/// Scan depth for the non-decreasing hypothesis when callers do not pick one.
pub const DEFAULT_HYPOTHESIS_DEPTH: u32 = 64;

/// Convexity-radius scan bound and early-exit run length. Terms behave as
/// `(C/k)^{1/(k-1)} -> 1`, so the minimum sits at small k.
const CONVEXITY_K_MAX: u32 = 512;
const CONVEXITY_INCREASING_RUN: u32 = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundsError {
    /// `gamma_k` or `phi_k` non-positive: the spec is degenerate at this index.
    NonpositiveDenominator { k: u32, value: f64 },
    /// The non-decreasing-weights hypothesis (or the `b_1` range it
    /// presumes) fails, so the distortion envelope does not apply.
    HypothesisViolated { reason: String },
    /// The bracketed factor `1 - C b_1` in the convexity radius is not positive.
    DegenerateDenominator { value: f64 },
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::NonpositiveDenominator { k, value } => {
                write!(f, "coefficient weight at k = {k} is {value} <= 0")
            }
            BoundsError::HypothesisViolated { reason } => {
                write!(f, "distortion hypothesis violated: {reason}")
            }
            BoundsError::DegenerateDenominator { value } => {
                write!(f, "convexity-radius denominator factor {value} <= 0")
            }
        }
    }
}

impl std::error::Error for BoundsError {}

/// Which written form of the `|b_1|` correction divisor to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DistortionMode {
    /// Divisor `beta`, as displayed in the bound's statement.
    Statement,
    /// Divisor `1 - alpha`, as carried through the derivation. Default.
    #[default]
    Proof,
}

/// Sharp per-index coefficient bounds `(1-alpha)/gamma_k` (analytic,
/// `k >= 2`) and `(1-alpha)/phi_k` (co-analytic, `k >= 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffBounds {
    /// Absent at k = 1 where the analytic part is pinned to 1.
    pub a_max: Option<f64>,
    pub b_max: f64,
}

pub fn coeff_bounds(spec: &FamilySpec, k: u32) -> Result<CoeffBounds, BoundsError> {
    let scale = 1.0 - spec.alpha;
    let phi = spec.phi(k);
    if phi <= 0.0 {
        return Err(BoundsError::NonpositiveDenominator { k, value: phi });
    }
    let a_max = if k >= 2 {
        let gamma = spec.gamma(k);
        if gamma <= 0.0 {
            return Err(BoundsError::NonpositiveDenominator { k, value: gamma });
        }
        Some(scale / gamma)
    } else {
        None
    };
    Ok(CoeffBounds {
        a_max,
        b_max: scale / phi,
    })
}

/// `beta = min(gamma_2, phi_2)`, the envelope's leading weight.
pub fn beta(spec: &FamilySpec) -> f64 {
    spec.gamma(2).min(spec.phi(2))
}

/// True when both weight sequences are non-decreasing out to depth `k_max`
/// (`gamma` from k = 2, `phi` from k = 1).
pub fn check_hypothesis(spec: &FamilySpec, k_max: u32) -> bool {
    debug_assert!(k_max >= 3);
    let mut prev = spec.gamma(2);
    for k in 3..=k_max {
        let g = spec.gamma(k);
        if g < prev {
            return false;
        }
        prev = g;
    }
    let mut prev = spec.phi(1);
    for k in 2..=k_max {
        let p = spec.phi(k);
        if p < prev {
            return false;
        }
        prev = p;
    }
    true
}

/// The `|b_1|` correction multiplier `mu_1 - (-1)^E alpha v_1`; this also
/// equals `phi_1` because `[1]^m = 1`.
fn b1_multiplier(spec: &FamilySpec) -> f64 {
    spec.mu_at(1) - spec.sign_exponent().factor() * spec.alpha * spec.v_at(1)
}

fn correction(spec: &FamilySpec, b1_abs: f64, mode: DistortionMode) -> f64 {
    let divisor = match mode {
        DistortionMode::Statement => beta(spec),
        DistortionMode::Proof => 1.0 - spec.alpha,
    };
    1.0 - b1_multiplier(spec) / divisor * b1_abs
}

fn require_hypothesis(spec: &FamilySpec, b1_abs: f64) -> Result<(), BoundsError> {
    if !(0.0..1.0).contains(&b1_abs) {
        return Err(BoundsError::HypothesisViolated {
            reason: format!("|b_1| = {b1_abs} outside [0, 1)"),
        });
    }
    let b1_cap = (1.0 - spec.alpha) / spec.phi(1);
    if b1_abs > b1_cap + 1e-12 {
        return Err(BoundsError::HypothesisViolated {
            reason: format!("|b_1| = {b1_abs} exceeds the sharp bound {b1_cap}"),
        });
    }
    if !check_hypothesis(spec, DEFAULT_HYPOTHESIS_DEPTH) {
        return Err(BoundsError::HypothesisViolated {
            reason: "coefficient weights are not non-decreasing".into(),
        });
    }
    Ok(())
}

/// Two-sided bound on `|f(z)|` at `|z| = r`:
/// `(1 -+ |b_1|) r -+ ((1-alpha)/beta)(1 - D |b_1|) r^2`, the lower branch
/// clamped at 0. `D` depends on the mode.
pub fn distortion(
    spec: &FamilySpec,
    b1_abs: f64,
    r: f64,
    mode: DistortionMode,
) -> Result<(f64, f64), BoundsError> {
    require_hypothesis(spec, b1_abs)?;
    if !(0.0..1.0).contains(&r) {
        return Err(BoundsError::HypothesisViolated {
            reason: format!("radius r = {r} outside [0, 1)"),
        });
    }
    let quad = (1.0 - spec.alpha) / beta(spec) * correction(spec, b1_abs, mode);
    let upper = (1.0 + b1_abs) * r + quad * r * r;
    let lower = ((1.0 - b1_abs) * r - quad * r * r).max(0.0);
    Ok((lower, upper))
}

/// Radius of the disc guaranteed to be covered by the image `f(D)`.
///
/// Statement mode evaluates the covering display
/// `(1/beta)(beta - 1 + alpha + (mu_1 - (-1)^E alpha v_1 - beta)|b_1|)`;
/// proof mode takes the `r -> 1` limit of the proof-consistent lower
/// distortion bound. The two are algebraically identical.
pub fn covering_radius(
    spec: &FamilySpec,
    b1_abs: f64,
    mode: DistortionMode,
) -> Result<f64, BoundsError> {
    require_hypothesis(spec, b1_abs)?;
    let b = beta(spec);
    Ok(match mode {
        DistortionMode::Statement => {
            (b - 1.0 + spec.alpha + (b1_multiplier(spec) - b) * b1_abs) / b
        }
        DistortionMode::Proof => {
            (1.0 - b1_abs)
                - (1.0 - spec.alpha) / b * correction(spec, b1_abs, DistortionMode::Proof)
        }
    })
}

/// Radius of convexity
/// `min_k {(1 - b_1) / (k [1 - C b_1])}^{1/(k-1)}` over `k >= 2`, with
/// `C = (mu_1 - (-1)^E alpha v_1)/(1 - alpha)`, evaluated with `|b_1|`
/// and capped at 1. Scans with early exit once the terms keep increasing.
pub fn convexity_radius(spec: &FamilySpec, b1_abs: f64) -> Result<f64, BoundsError> {
    let c = b1_multiplier(spec) / (1.0 - spec.alpha);
    let denom_factor = 1.0 - c * b1_abs;
    if denom_factor <= 0.0 {
        return Err(BoundsError::DegenerateDenominator { value: denom_factor });
    }
    let top = 1.0 - b1_abs;
    let mut best = f64::INFINITY;
    let mut increasing_run = 0u32;
    let mut prev = f64::INFINITY;
    for k in 2..=CONVEXITY_K_MAX {
        let term = (top / (k as f64 * denom_factor)).powf(1.0 / (k as f64 - 1.0));
        if term < best {
            best = term;
        }
        if term > prev {
            increasing_run += 1;
            if increasing_run >= CONVEXITY_INCREASING_RUN {
                break;
            }
        } else {
            increasing_run = 0;
        }
        prev = term;
    }
    Ok(best.min(1.0))
}
