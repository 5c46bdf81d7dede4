//! Brute-force numerical oracles: grid verification of the defining
//! real-part condition, sense-preservation, the distortion envelope,
//! discrete image-convexity, an independent convexity-radius search, and
//! the positive-real-axis necessity probe.
//!
//! Grid enumeration is deterministic (radii in listed order, angles
//! ascending), so identical inputs always produce bit-identical reports.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, DistortionMode};
use crate::family::{FamilyError, FamilySpec, RatioSeries};
use crate::series::HarmonicFunction;

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyError {
    /// The probe's entry gate failed (functional margin below the floor).
    PreconditionUnmet { reason: String },
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::PreconditionUnmet { reason } => write!(f, "precondition unmet: {reason}"),
        }
    }
}

impl std::error::Error for VerifyError {}

/// Deterministic polar evaluation grid strictly inside the disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Circle radii, each in (0, 1), probed in listed order.
    pub radii: Vec<f64>,
    /// Sample count per circle (angles `2 pi s / count`, s ascending).
    pub angles_per_circle: usize,
    /// Outermost radius used when radii are generated rather than listed.
    pub r_max: f64,
}

impl GridSpec {
    /// `count` evenly spaced radii ending at `r_max`, with `angles` samples
    /// per circle.
    pub fn uniform(count: usize, angles: usize, r_max: f64) -> Self {
        let radii = (1..=count).map(|t| r_max * t as f64 / count as f64).collect();
        GridSpec {
            radii,
            angles_per_circle: angles,
            r_max,
        }
    }

    /// Enumerate grid points with their (radius, angle) indices.
    fn points(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        let angles = self.angles_per_circle;
        self.radii.iter().enumerate().flat_map(move |(ri, &r)| {
            (0..angles).map(move |s| {
                let theta = 2.0 * PI * s as f64 / angles as f64;
                ((ri, s), Complex64::from_polar(r, theta))
            })
        })
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::uniform(12, 360, 0.999)
    }
}

/// Structured outcome of a numerical check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// Smallest observed margin; negative means a violation. Degenerate
    /// evaluation points (poles, critical points) contribute `-inf`.
    pub min_margin: f64,
    /// Grid point realizing the minimum margin, when any point was probed.
    pub witness: Option<Complex64>,
    pub checks_run: usize,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn from_scan(scan: MarginScan, tol: f64) -> Self {
        VerificationReport {
            passed: scan.min_margin >= -tol,
            min_margin: scan.min_margin,
            witness: scan.witness,
            checks_run: scan.checks_run,
            notes: scan.notes,
        }
    }
}

/// Running minimum with deterministic lexicographic (radius, angle)
/// tie-breaking, so any evaluation order reduces to the same witness.
struct MarginScan {
    min_margin: f64,
    witness: Option<Complex64>,
    best_key: (usize, usize),
    checks_run: usize,
    notes: Vec<String>,
}

impl MarginScan {
    fn new() -> Self {
        MarginScan {
            min_margin: f64::INFINITY,
            witness: None,
            best_key: (usize::MAX, usize::MAX),
            checks_run: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, key: (usize, usize), z: Complex64, margin: f64) {
        self.checks_run += 1;
        if margin < self.min_margin || (margin == self.min_margin && key < self.best_key) {
            self.min_margin = margin;
            self.witness = Some(z);
            self.best_key = key;
        }
    }
}

/// Minimum over the grid of `Re(ratio) - alpha`; the family condition
/// requires it positive. Denominator zeros are reported in notes and
/// scored as `-inf`, not crashed.
pub fn check_re_condition(
    f: &HarmonicFunction,
    spec: &FamilySpec,
    grid: &GridSpec,
    tol: f64,
) -> VerificationReport {
    let ratio = RatioSeries::new(spec, f);
    let mut scan = MarginScan::new();
    for (key, z) in grid.points() {
        match ratio.at(z) {
            Ok(w) => scan.record(key, z, w.re - spec.alpha),
            Err(FamilyError::ZeroDenominator { .. }) => {
                scan.notes.push(format!("denominator vanishes at z = {z}"));
                scan.record(key, z, f64::NEG_INFINITY);
            }
            Err(e) => {
                scan.notes.push(format!("evaluation error at z = {z}: {e}"));
                scan.record(key, z, f64::NEG_INFINITY);
            }
        }
    }
    VerificationReport::from_scan(scan, tol)
}

/// Minimum over the grid of `1 - |g'/h'|`; critical points of `h'` count
/// as failures.
pub fn check_sense_preserving(
    f: &HarmonicFunction,
    grid: &GridSpec,
    tol: f64,
) -> VerificationReport {
    let mut scan = MarginScan::new();
    for (key, z) in grid.points() {
        match f.dilatation(z) {
            Ok(w) => scan.record(key, z, 1.0 - w.norm()),
            Err(e) => {
                scan.notes.push(format!("critical point at z = {z}: {e}"));
                scan.record(key, z, f64::NEG_INFINITY);
            }
        }
    }
    VerificationReport::from_scan(scan, tol)
}

/// Angles sampled per circle by the distortion check.
pub const DISTORTION_ANGLES: usize = 720;

/// Check `lower - tol <= |f| <= upper + tol` on each listed circle,
/// reading `|b_1|` from the function. Hypothesis failures are folded into
/// a failed report rather than an error.
pub fn check_distortion(
    f: &HarmonicFunction,
    spec: &FamilySpec,
    mode: DistortionMode,
    radii: &[f64],
    tol: f64,
) -> VerificationReport {
    let b1_abs = f.b_coeff(1).norm();
    let mut scan = MarginScan::new();
    for (ri, &r) in radii.iter().enumerate() {
        let (lower, upper) = match bounds::distortion(spec, b1_abs, r, mode) {
            Ok(pair) => pair,
            Err(e) => {
                scan.notes.push(format!("bounds unavailable at r = {r}: {e}"));
                scan.record((ri, 0), Complex64::new(r, 0.0), f64::NEG_INFINITY);
                continue;
            }
        };
        for s in 0..DISTORTION_ANGLES {
            let theta = 2.0 * PI * s as f64 / DISTORTION_ANGLES as f64;
            let z = Complex64::from_polar(r, theta);
            let value = f.evaluate_unchecked(z).norm();
            scan.record((ri, s), z, (value - lower).min(upper - value));
        }
    }
    VerificationReport::from_scan(scan, tol)
}

/// Relative slack treating near-zero cross products as straight.
const CONVEXITY_CROSS_SLACK: f64 = 1e-12;
/// Tolerance on the total-turning test (radians).
const TURNING_TOL: f64 = 1e-6;

/// Discrete convexity of the image curve `theta -> f(r e^{i theta})`:
/// all cross products of consecutive edges share one sign and the total
/// turning is +-2 pi.
pub fn convex_image_test(f: &HarmonicFunction, r: f64, samples: usize) -> bool {
    debug_assert!(r > 0.0 && r < 1.0);
    debug_assert!(samples >= 64);
    let pts: Vec<Complex64> = (0..samples)
        .map(|s| {
            let theta = 2.0 * PI * s as f64 / samples as f64;
            f.evaluate_unchecked(Complex64::from_polar(r, theta))
        })
        .collect();
    let edges: Vec<Complex64> = (0..samples)
        .map(|s| pts[(s + 1) % samples] - pts[s])
        .collect();

    let crosses: Vec<f64> = (0..samples)
        .map(|s| {
            let e1 = edges[s];
            let e2 = edges[(s + 1) % samples];
            e1.re * e2.im - e1.im * e2.re
        })
        .collect();
    let scale = crosses.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        // Degenerate (collinear or constant) image curve.
        return false;
    }
    let slack = CONVEXITY_CROSS_SLACK * scale;
    let has_pos = crosses.iter().any(|&c| c > slack);
    let has_neg = crosses.iter().any(|&c| c < -slack);
    if has_pos && has_neg {
        return false;
    }

    let mut turning = 0.0;
    for s in 0..samples {
        let e1 = edges[s];
        let e2 = edges[(s + 1) % samples];
        let cross = e1.re * e2.im - e1.im * e2.re;
        let dot = e1.re * e2.re + e1.im * e2.im;
        turning += cross.atan2(dot);
    }
    (turning.abs() - 2.0 * PI).abs() < TURNING_TOL
}

/// Samples per circle used by the bisection search.
pub const BRUTE_CONVEXITY_SAMPLES: usize = 1024;
/// Search cap strictly inside the disc.
pub const BRUTE_CONVEXITY_R_CAP: f64 = 0.999;

/// Bisection estimate of the largest radius of image convexity: a radius
/// qualifies when the image curve is convex at both `r` and `0.99 r`.
/// The result is a lower-bound estimate with resolution `tol_r`.
pub fn brute_convexity_radius(f: &HarmonicFunction, tol_r: f64) -> f64 {
    let probe = |r: f64| {
        convex_image_test(f, r, BRUTE_CONVEXITY_SAMPLES)
            && convex_image_test(f, 0.99 * r, BRUTE_CONVEXITY_SAMPLES)
    };
    if probe(BRUTE_CONVEXITY_R_CAP) {
        return BRUTE_CONVEXITY_R_CAP;
    }
    let mut lo = 0.0;
    let mut hi = BRUTE_CONVEXITY_R_CAP;
    while hi - lo > tol_r {
        let mid = 0.5 * (lo + hi);
        if probe(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Minimum functional excess required before the necessity probe runs.
pub const NECESSITY_MIN_MARGIN: f64 = 0.05;
/// Probe resolution: coarse sweep plus a dense tail toward the boundary.
const NECESSITY_COARSE_STEPS: usize = 512;
const NECESSITY_FINE_STEPS: usize = 1024;
const NECESSITY_R_TOP: f64 = 0.9999;

/// Walk `z = r` up the positive real axis looking for a point where
/// `Re(ratio) - alpha` turns negative, confirming non-membership of a
/// sign-patterned function whose functional exceeds `1 + margin`.
///
/// `passed` means a violation WAS found; `min_margin` is the most
/// negative observed value and `witness` the first violating radius.
pub fn necessity_probe(
    f: &HarmonicFunction,
    spec: &FamilySpec,
    margin: f64,
) -> Result<VerificationReport, VerifyError> {
    if margin < NECESSITY_MIN_MARGIN {
        return Err(VerifyError::PreconditionUnmet {
            reason: format!("margin {margin} below the {NECESSITY_MIN_MARGIN} floor"),
        });
    }
    if !spec.has_sign_pattern(f) {
        return Err(VerifyError::PreconditionUnmet {
            reason: "function does not carry the sign pattern".into(),
        });
    }
    let functional = spec.functional(f);
    if functional < 1.0 + margin {
        return Err(VerifyError::PreconditionUnmet {
            reason: format!("functional {functional} below 1 + margin = {}", 1.0 + margin),
        });
    }

    let ratio = RatioSeries::new(spec, f);
    let mut scan = MarginScan::new();
    let mut notes = Vec::new();
    let coarse = (1..=NECESSITY_COARSE_STEPS).map(|t| 0.99 * t as f64 / NECESSITY_COARSE_STEPS as f64);
    let fine = (1..=NECESSITY_FINE_STEPS)
        .map(|t| 0.99 + (NECESSITY_R_TOP - 0.99) * t as f64 / NECESSITY_FINE_STEPS as f64);
    let mut first_violation = None;
    for (idx, r) in coarse.chain(fine).enumerate() {
        let z = Complex64::new(r, 0.0);
        match ratio.at(z) {
            Ok(w) => {
                let value = w.re - spec.alpha;
                scan.record((idx, 0), z, value);
                if value < 0.0 && first_violation.is_none() {
                    first_violation = Some(z);
                }
            }
            Err(e) => notes.push(format!("skipped r = {r}: {e}")),
        }
    }
    let found = first_violation.is_some();
    Ok(VerificationReport {
        passed: found,
        min_margin: scan.min_margin,
        witness: first_violation.or(scan.witness),
        checks_run: scan.checks_run,
        notes,
    })
}
