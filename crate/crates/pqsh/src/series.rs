//! Truncated harmonic power series `f = h + conj(g)` on the unit disc:
//! construction, evaluation, Hadamard convolution, the harmonic Salagean
//! operator, and the second dilatation.
//!
//! Values are immutable after construction and freely shareable.

use std::fmt;

use num_complex::Complex64;

use crate::pq::{self, PQParams};

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    /// Evaluation requested at `|z| >= 1`; the series is only
    /// contractually meaningful inside the disc.
    OutsideDisc { z: Complex64 },
    /// `|h'(z)|` below tolerance: the dilatation has a critical point and
    /// sense-preservation fails there by definition.
    VanishingDerivative { z: Complex64 },
    /// A construction received a NaN or infinite coefficient.
    NonFiniteCoefficient { index: usize },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::OutsideDisc { z } => write!(f, "evaluation point {z} outside the unit disc"),
            SeriesError::VanishingDerivative { z } => {
                write!(f, "analytic derivative vanishes at {z}; dilatation undefined")
            }
            SeriesError::NonFiniteCoefficient { index } => {
                write!(f, "non-finite coefficient at array index {index}")
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// `|h'|` below this is treated as a critical point.
pub const DERIVATIVE_TOL: f64 = 1e-14;

/// Default truncation order. Member-function coefficients decay at least
/// quadratically, so the tail mass beyond 64 terms is below 1e-12 for
/// `|z| <= 0.999` on every preset.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Truncated harmonic function `f(z) = z + sum a_k z^k + conj(sum b_k z^k)`.
///
/// The analytic part is normalized (`a_1 = 1` implicitly); stored arrays
/// hold `a_k` for `k = 2..=N` and `b_k` for `k = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicFunction {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    trunc: usize,
}

impl HarmonicFunction {
    /// Build from coefficient arrays: `a[i]` is the coefficient of
    /// `z^{i+2}` and `b[i]` of the co-analytic `z^{i+1}` term. The
    /// truncation order is inferred and both arrays padded to match.
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self, SeriesError> {
        for (i, c) in a.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(SeriesError::NonFiniteCoefficient { index: i });
            }
        }
        for (i, c) in b.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(SeriesError::NonFiniteCoefficient { index: i });
            }
        }
        let trunc = (a.len() + 1).max(b.len()).max(1);
        Ok(Self::from_parts(a, b, trunc))
    }

    /// Build from real coefficient arrays (the JSON interchange form).
    pub fn from_real(a: &[f64], b: &[f64]) -> Result<Self, SeriesError> {
        Self::new(
            a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            b.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// The identity map `f(z) = z` at truncation order `trunc`.
    pub fn identity(trunc: usize) -> Self {
        Self::from_parts(Vec::new(), Vec::new(), trunc.max(1))
    }

    pub(crate) fn from_parts(mut a: Vec<Complex64>, mut b: Vec<Complex64>, trunc: usize) -> Self {
        let trunc = trunc.max(a.len() + 1).max(b.len()).max(1);
        a.resize(trunc - 1, Complex64::new(0.0, 0.0));
        b.resize(trunc, Complex64::new(0.0, 0.0));
        HarmonicFunction { a, b, trunc }
    }

    /// Re-truncate (pad or drop) to order `trunc`.
    pub fn with_truncation(&self, trunc: usize) -> Self {
        let trunc = trunc.max(1);
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.resize(trunc - 1, Complex64::new(0.0, 0.0));
        b.resize(trunc, Complex64::new(0.0, 0.0));
        HarmonicFunction { a, b, trunc }
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    /// Analytic coefficient `a_k` for `k >= 1` (`a_1 = 1` by normalization).
    pub fn a_coeff(&self, k: usize) -> Complex64 {
        match k {
            0 => Complex64::new(0.0, 0.0),
            1 => Complex64::new(1.0, 0.0),
            _ => self
                .a
                .get(k - 2)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0)),
        }
    }

    /// Co-analytic coefficient `b_k` for `k >= 1`.
    pub fn b_coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.b
                .get(k - 1)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0))
        }
    }

    /// Stored `a_k` slice, index 0 holding `a_2`.
    pub fn a_tail(&self) -> &[Complex64] {
        &self.a
    }

    /// Stored `b_k` slice, index 0 holding `b_1`.
    pub fn b_all(&self) -> &[Complex64] {
        &self.b
    }

    /// Full analytic coefficient vector `(a_1, a_2, ..., a_N)` with the
    /// normalized leading 1.
    pub fn analytic_coeffs(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.trunc);
        v.push(Complex64::new(1.0, 0.0));
        v.extend_from_slice(&self.a);
        v
    }

    /// Evaluate `f(z) = h(z) + conj(g(z))` inside the disc.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, SeriesError> {
        if z.norm() >= 1.0 {
            return Err(SeriesError::OutsideDisc { z });
        }
        Ok(self.evaluate_unchecked(z))
    }

    pub(crate) fn evaluate_unchecked(&self, z: Complex64) -> Complex64 {
        // Horner on h(z)/z = 1 + sum a_k z^{k-1} and g(z)/z.
        let mut h = Complex64::new(0.0, 0.0);
        for &ak in self.a.iter().rev() {
            h = (h + ak) * z;
        }
        h = (h + 1.0) * z;
        let mut g = Complex64::new(0.0, 0.0);
        for &bk in self.b.iter().rev() {
            g = g * z + bk;
        }
        g *= z;
        h + g.conj()
    }

    /// `h'(z)` by exact term-wise differentiation of the stored polynomial.
    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        let mut d = Complex64::new(0.0, 0.0);
        for (i, &ak) in self.a.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            d = d * z + k * ak;
        }
        d * z + 1.0
    }

    /// `g'(z)` by exact term-wise differentiation.
    pub fn g_prime(&self, z: Complex64) -> Complex64 {
        let mut d = Complex64::new(0.0, 0.0);
        for (i, &bk) in self.b.iter().enumerate().rev() {
            let k = (i + 1) as f64;
            d = d * z + k * bk;
        }
        d
    }

    /// Second dilatation `w(z) = g'(z)/h'(z)`; `|w| < 1` is the
    /// sense-preservation criterion.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64, SeriesError> {
        let hp = self.h_prime(z);
        if hp.norm() < DERIVATIVE_TOL {
            return Err(SeriesError::VanishingDerivative { z });
        }
        Ok(self.g_prime(z) / hp)
    }

    /// Coefficient-wise Hadamard convolution; shorter truncations are
    /// padded with zeros and the leading analytic term stays `z`.
    pub fn hadamard(&self, other: &HarmonicFunction) -> HarmonicFunction {
        let trunc = self.trunc.max(other.trunc);
        let a = (2..=trunc)
            .map(|k| self.a_coeff(k) * other.a_coeff(k))
            .collect();
        let b = (1..=trunc)
            .map(|k| self.b_coeff(k) * other.b_coeff(k))
            .collect();
        HarmonicFunction { a, b, trunc }
    }

    /// Harmonic Salagean operator of order `m`: analytic coefficients are
    /// scaled by `[k]^m`, co-analytic by `(-1)^m [k]^m`; order 0 is the
    /// identity.
    pub fn salagean(&self, m: u32, pq: PQParams) -> HarmonicFunction {
        if m == 0 {
            return self.clone();
        }
        let co_sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(i, &ak)| ak * pq::bracket_pow(i as u32 + 2, m, pq))
            .collect();
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(i, &bk)| bk * (co_sign * pq::bracket_pow(i as u32 + 1, m, pq)))
            .collect();
        HarmonicFunction {
            a,
            b,
            trunc: self.trunc,
        }
    }
}

/// Apply the Salagean operator to an analytic series by literal iteration
/// of `c -> zD(c)`, `m` times. Input and output slices hold the
/// coefficient of `z^{i+1}` at index `i`. Oracle for the closed form used
/// by [`HarmonicFunction::salagean`].
pub fn iterated_salagean(coeffs: &[Complex64], m: u32, pq: PQParams) -> Vec<Complex64> {
    let mut cur = coeffs.to_vec();
    for _ in 0..m {
        // zD maps sum c_k z^k to sum [k] c_k z^k: derive then shift back.
        cur = pq::derive_series(&cur, pq);
    }
    cur
}

/// Harmonic kernel `Phi(z) = z + sum w_k z^k + (-1)^sign sum v_k conj(z)^k`
/// with non-negative weights; the `(-1)^sign` factor is applied when the
/// kernel is materialized as a series.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    /// Analytic weights for `k = 2..=N` (leading term is the unit `z`).
    analytic: Vec<f64>,
    /// Co-analytic weights for `k = 1..=N`, before the sign is applied.
    co_analytic: Vec<f64>,
    /// The exponent `i` (or `j`) in `{0, 1}`.
    sign: u8,
}

impl KernelFunction {
    pub fn new(analytic: Vec<f64>, co_analytic: Vec<f64>, sign: u8) -> Self {
        debug_assert!(sign <= 1);
        debug_assert!(analytic.iter().chain(&co_analytic).all(|&w| w >= 0.0));
        KernelFunction {
            analytic,
            co_analytic,
            sign: sign & 1,
        }
    }

    pub fn sign(&self) -> u8 {
        self.sign
    }

    /// Analytic weight at index `k >= 2`.
    pub fn analytic_weight(&self, k: usize) -> f64 {
        if k < 2 {
            if k == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            self.analytic.get(k - 2).copied().unwrap_or(0.0)
        }
    }

    /// Co-analytic weight at index `k >= 1` (sign not applied).
    pub fn co_analytic_weight(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.co_analytic.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    /// Materialize as a harmonic series with the `(-1)^sign` factor on the
    /// co-analytic part, truncated at `trunc`.
    pub fn to_harmonic(&self, trunc: usize) -> HarmonicFunction {
        let s = if self.sign == 0 { 1.0 } else { -1.0 };
        let a = (2..=trunc)
            .map(|k| Complex64::new(self.analytic_weight(k), 0.0))
            .collect();
        let b = (1..=trunc)
            .map(|k| Complex64::new(s * self.co_analytic_weight(k), 0.0))
            .collect();
        HarmonicFunction::from_parts(a, b, trunc)
    }
}
