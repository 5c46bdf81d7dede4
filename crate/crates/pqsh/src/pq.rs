//! Twin-basic numbers `[k]` and the (p,q)-derivative, in coefficient-wise
//! and difference-quotient forms.
//!
//! The bracket `[k] = (p^k - q^k)/(p - q)` degenerates to `k p^{k-1}` as
//! `q -> p`; [`bracket`] switches to that closed form inside a relative
//! closeness threshold to avoid catastrophic cancellation, and otherwise
//! accumulates the division-free running sum `sum_i p^{k-1-i} q^i`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative threshold below which `p` and `q` are treated as equal.
pub const PQ_EQUAL_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PqError {
    /// Parameters outside `0 < q <= p <= 1`.
    InvalidParams { p: f64, q: f64 },
    /// The difference quotient `(f(pz) - f(qz)) / ((p-q)z)` is undefined:
    /// `p = q` (within the closeness threshold) or `z = 0`. Callers must
    /// fall back to the series form.
    DegenerateQuotient,
}

impl fmt::Display for PqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PqError::InvalidParams { p, q } => {
                write!(f, "invalid (p,q) = ({p}, {q}): require 0 < q <= p <= 1")
            }
            PqError::DegenerateQuotient => {
                write!(f, "difference quotient undefined for p = q or z = 0")
            }
        }
    }
}

impl std::error::Error for PqError {}

/// The calculus backbone: a validated pair with `0 < q <= p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PqUnchecked", into = "PqUnchecked")]
pub struct PQParams {
    p: f64,
    q: f64,
}

#[derive(Serialize, Deserialize)]
struct PqUnchecked {
    p: f64,
    q: f64,
}

impl TryFrom<PqUnchecked> for PQParams {
    type Error = PqError;
    fn try_from(raw: PqUnchecked) -> Result<Self, PqError> {
        PQParams::new(raw.p, raw.q)
    }
}

impl From<PQParams> for PqUnchecked {
    fn from(pq: PQParams) -> Self {
        PqUnchecked { p: pq.p, q: pq.q }
    }
}

impl PQParams {
    pub fn new(p: f64, q: f64) -> Result<Self, PqError> {
        if p.is_finite() && q.is_finite() && 0.0 < q && q <= p && p <= 1.0 {
            Ok(PQParams { p, q })
        } else {
            Err(PqError::InvalidParams { p, q })
        }
    }

    /// The classical limit p = q = 1.
    pub fn classical() -> Self {
        PQParams { p: 1.0, q: 1.0 }
    }

    /// The one-parameter q-calculus specialization p = 1.
    pub fn q_only(q: f64) -> Result<Self, PqError> {
        PQParams::new(1.0, q)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// True when `|p - q|` is inside the closeness threshold, so the
    /// bracket must use the confluent closed form `k p^{k-1}`.
    pub fn is_confluent(&self) -> bool {
        (self.p - self.q).abs() < PQ_EQUAL_REL_TOL * self.p.max(self.q)
    }
}

impl Default for PQParams {
    fn default() -> Self {
        PQParams::classical()
    }
}

/// Twin-basic number `[k] = (p^k - q^k)/(p - q)`, with `[k] = k p^{k-1}`
/// at p = q. `[0] = 0` and `[1] = 1` for every parameter pair.
pub fn bracket(k: u32, pq: PQParams) -> f64 {
    if pq.is_confluent() {
        confluent_bracket(k, pq.p())
    } else {
        bracket_unordered(k, pq.p(), pq.q())
    }
}

/// `[k]^m`, the repeated power used throughout the operator algebra.
pub fn bracket_pow(k: u32, m: u32, pq: PQParams) -> f64 {
    bracket(k, pq).powi(m as i32)
}

fn confluent_bracket(k: u32, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.powi(k as i32 - 1)
    }
}

/// Running-sum evaluation `sum_{i=0}^{k-1} x^{k-1-i} y^i`, equal to the
/// subtractive closed form but uniformly accurate for x near y. Symmetric
/// in (x, y); does not require the ordering invariant.
pub(crate) fn bracket_unordered(k: u32, x: f64, y: f64) -> f64 {
    // Horner form of the homogeneous sum: b_{i+1} = x*b_i + y^i.
    let mut b = 0.0;
    let mut ypow = 1.0;
    for _ in 0..k {
        b = x * b + ypow;
        ypow *= y;
    }
    b
}

/// Coefficient-wise (p,q)-derivative of an analytic series.
///
/// Input slice index `i` holds the coefficient of `z^{i+1}`; the output
/// slice index `i` holds the coefficient of `z^i` of the derivative, so
/// `(Df)(z) = sum_{k>=1} [k] c_k z^{k-1}` maps to `d[i] = [i+1] c[i]`.
pub fn derive_series(coeffs: &[Complex64], pq: PQParams) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * bracket(i as u32 + 1, pq))
        .collect()
}

/// Difference-quotient (p,q)-derivative `(f(pz) - f(qz)) / ((p - q) z)`.
///
/// Cross-validation oracle for [`derive_series`]; only defined away from
/// the confluent line and the origin.
pub fn derive_quotient<F>(f: F, z: Complex64, pq: PQParams) -> Result<Complex64, PqError>
where
    F: Fn(Complex64) -> Complex64,
{
    if pq.is_confluent() || z == Complex64::new(0.0, 0.0) {
        return Err(PqError::DegenerateQuotient);
    }
    Ok((f(pq.p() * z) - f(pq.q() * z)) / ((pq.p() - pq.q()) * z))
}
