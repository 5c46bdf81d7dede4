//! Family specification, kernel generation, the coefficient functional,
//! membership predicates, the defining ratio, and the six presets.
//!
//! A family instance is the parameter bag `(m, n, i, j, alpha, p, q)` plus
//! four coefficient-weight sequences. Membership of a harmonic function is
//! governed by the condition `Re{(L^m f * Phi)/(L^n f * Psi)} > alpha` on
//! the disc; the coefficient functional gives a sufficient (and for
//! sign-patterned functions exact) test with threshold 1.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pq::{self, PQParams};
use crate::series::{HarmonicFunction, KernelFunction};

/// Default tolerance on the coefficient-functional membership threshold.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// `|denominator|` below this raises [`FamilyError::ZeroDenominator`].
pub const DENOMINATOR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyError {
    /// Preset name not one of the recognized family constructions.
    UnknownPreset { name: String },
    /// The defining ratio's denominator vanished at the witness point.
    ZeroDenominator { witness: Complex64 },
    /// A parameter or sequence constraint is violated.
    InvalidSpec { reason: String },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::UnknownPreset { name } => write!(f, "unknown preset `{name}`"),
            FamilyError::ZeroDenominator { witness } => {
                write!(f, "ratio denominator vanishes at z = {witness}")
            }
            FamilyError::InvalidSpec { reason } => write!(f, "invalid family spec: {reason}"),
        }
    }
}

impl std::error::Error for FamilyError {}

/// A coefficient-weight sequence, symbolic or explicit.
///
/// Symbolic kinds cover every preset; anything else is supplied as an
/// explicit non-negative array. Explicit arrays are positional from the
/// sequence's first index (2 for the analytic weights, 1 for the
/// co-analytic); indices beyond the array read as 0, which spec
/// validation rejects inside the working truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSeq {
    #[serde(with = "symbolic_one")]
    One,
    #[serde(with = "symbolic_k")]
    K,
    #[serde(with = "symbolic_k_squared")]
    KSquared,
    Explicit(Vec<f64>),
}

macro_rules! symbolic_tag {
    ($mod_name:ident, $tag:literal) => {
        mod $mod_name {
            use serde::{de::Error, Deserialize, Deserializer, Serializer};
            pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str($tag)
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
                let tag = String::deserialize(d)?;
                if tag == $tag {
                    Ok(())
                } else {
                    Err(D::Error::custom(format!("expected `{}`", $tag)))
                }
            }
        }
    };
}

symbolic_tag!(symbolic_one, "1");
symbolic_tag!(symbolic_k, "k");
symbolic_tag!(symbolic_k_squared, "k^2");

impl CoeffSeq {
    /// Value at index `k`, where `first_index` anchors explicit arrays.
    pub fn at_from(&self, k: u32, first_index: u32) -> f64 {
        match self {
            CoeffSeq::One => 1.0,
            CoeffSeq::K => k as f64,
            CoeffSeq::KSquared => (k as f64) * (k as f64),
            CoeffSeq::Explicit(values) => {
                if k < first_index {
                    0.0
                } else {
                    values.get((k - first_index) as usize).copied().unwrap_or(0.0)
                }
            }
        }
    }

    /// True when the sequence is defined at every index (symbolic kinds).
    pub fn is_symbolic(&self) -> bool {
        !matches!(self, CoeffSeq::Explicit(_))
    }
}

/// The sign exponent `E = n + j - (m + i)` appearing in the co-analytic
/// weight; only its parity matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignExponent(pub i64);

impl SignExponent {
    pub fn new(m: u32, n: u32, i: u8, j: u8) -> Self {
        SignExponent(n as i64 + j as i64 - (m as i64 + i as i64))
    }

    /// `(-1)^E` as a real factor.
    pub fn factor(self) -> f64 {
        if self.0.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// One family instance: operator orders, kernel signs, the order bound
/// `alpha`, the calculus parameters, and the four weight sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub m: u32,
    pub n: u32,
    pub i: u8,
    pub j: u8,
    pub alpha: f64,
    #[serde(flatten)]
    pub pq: PQParams,
    pub lambda: CoeffSeq,
    pub mu: CoeffSeq,
    pub u: CoeffSeq,
    pub v: CoeffSeq,
    #[serde(default = "default_trunc")]
    pub trunc: usize,
}

fn default_trunc() -> usize {
    crate::series::DEFAULT_TRUNCATION
}

/// The named family constructions.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// General orders (m, n) with the starlike-type kernel pair, p = q = 1.
    Yalcin { m: u32, n: u32 },
    /// Starlike-type family: (m, n) = (1, 0), p = q = 1.
    Starlike,
    /// Convex-type family: (m, n) = (2, 1), p = q = 1.
    Convex,
    /// Starlike-type family under the q-calculus: p = 1.
    StarlikeQ { q: f64 },
    /// Convex-type family under the q-calculus: p = 1.
    ConvexQ { q: f64 },
    /// Pure convolution family: m = n = 0, p = q = 1, caller kernels.
    Convolution {
        lambda: CoeffSeq,
        mu: CoeffSeq,
        i: u8,
        u: CoeffSeq,
        v: CoeffSeq,
        j: u8,
    },
}

impl FamilySpec {
    /// Build a spec from a named preset. The kernel weight sequences are
    /// read off the generating functions: `z/(1-z) -> 1`,
    /// `z/(1-z)^2 -> k`, `(z+z^2)/(1-z)^3 -> k^2`.
    pub fn preset(preset: Preset, alpha: f64) -> Result<FamilySpec, FamilyError> {
        let spec = match preset {
            Preset::Yalcin { m, n } => FamilySpec {
                m,
                n,
                i: 1,
                j: 0,
                alpha,
                pq: PQParams::classical(),
                lambda: CoeffSeq::K,
                mu: CoeffSeq::K,
                u: CoeffSeq::One,
                v: CoeffSeq::One,
                trunc: default_trunc(),
            },
            Preset::Starlike => {
                return FamilySpec::preset(Preset::Yalcin { m: 1, n: 0 }, alpha);
            }
            Preset::StarlikeQ { q } => {
                let mut spec = FamilySpec::preset(Preset::Starlike, alpha)?;
                spec.pq = PQParams::q_only(q)
                    .map_err(|e| FamilyError::InvalidSpec { reason: e.to_string() })?;
                spec
            }
            Preset::Convex => FamilySpec {
                m: 2,
                n: 1,
                i: 0,
                j: 1,
                alpha,
                pq: PQParams::classical(),
                lambda: CoeffSeq::KSquared,
                mu: CoeffSeq::KSquared,
                u: CoeffSeq::K,
                v: CoeffSeq::K,
                trunc: default_trunc(),
            },
            Preset::ConvexQ { q } => {
                let mut spec = FamilySpec::preset(Preset::Convex, alpha)?;
                spec.pq = PQParams::q_only(q)
                    .map_err(|e| FamilyError::InvalidSpec { reason: e.to_string() })?;
                spec
            }
            Preset::Convolution { lambda, mu, i, u, v, j } => FamilySpec {
                m: 0,
                n: 0,
                i,
                j,
                alpha,
                pq: PQParams::classical(),
                lambda,
                mu,
                u,
                v,
                trunc: default_trunc(),
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_truncation(mut self, trunc: usize) -> Self {
        self.trunc = trunc.max(1);
        self
    }

    /// Check every invariant; returns the deviation warnings that apply
    /// (`mu_1 = v_1`, `m = n`) without rejecting them.
    pub fn validate(&self) -> Result<Vec<String>, FamilyError> {
        let fail = |reason: String| Err(FamilyError::InvalidSpec { reason });
        if !(0.0..1.0).contains(&self.alpha) {
            return fail(format!("alpha = {} outside [0, 1)", self.alpha));
        }
        if self.i > 1 || self.j > 1 {
            return fail(format!("kernel signs (i, j) = ({}, {}) must be 0 or 1", self.i, self.j));
        }
        if self.m < self.n {
            return fail(format!("operator orders require m >= n, got m = {}, n = {}", self.m, self.n));
        }
        if self.trunc < 1 {
            return fail("truncation must be >= 1".into());
        }
        for k in 2..=self.trunc as u32 {
            let (l, u) = (self.lambda_at(k), self.u_at(k));
            if !(l > u && u >= 0.0) {
                return fail(format!("require lambda_k > u_k >= 0; at k = {k}: lambda = {l}, u = {u}"));
            }
            let (mu, v) = (self.mu_at(k), self.v_at(k));
            if !(mu > v && v >= 0.0) {
                return fail(format!("require mu_k > v_k >= 0 for k >= 2; at k = {k}: mu = {mu}, v = {v}"));
            }
        }
        let (mu1, v1) = (self.mu_at(1), self.v_at(1));
        if !(mu1 >= v1 && v1 >= 0.0) {
            return fail(format!("require mu_1 >= v_1 >= 0, got mu_1 = {mu1}, v_1 = {v1}"));
        }

        let mut warnings = Vec::new();
        if mu1 == v1 {
            warnings.push(format!(
                "mu_1 = v_1 = {mu1}: strict inequality relaxed to equality at k = 1"
            ));
        }
        if self.m == self.n {
            warnings.push(format!("m = n = {}: strict order inequality relaxed", self.m));
        }
        Ok(warnings)
    }

    pub fn lambda_at(&self, k: u32) -> f64 {
        self.lambda.at_from(k, 2)
    }

    pub fn u_at(&self, k: u32) -> f64 {
        self.u.at_from(k, 2)
    }

    pub fn mu_at(&self, k: u32) -> f64 {
        self.mu.at_from(k, 1)
    }

    pub fn v_at(&self, k: u32) -> f64 {
        self.v.at_from(k, 1)
    }

    pub fn sign_exponent(&self) -> SignExponent {
        SignExponent::new(self.m, self.n, self.i, self.j)
    }

    /// The kernel pair `(Phi, Psi)` truncated at the working order.
    pub fn kernels(&self) -> (KernelFunction, KernelFunction) {
        let n = self.trunc as u32;
        let phi = KernelFunction::new(
            (2..=n).map(|k| self.lambda_at(k)).collect(),
            (1..=n).map(|k| self.mu_at(k)).collect(),
            self.i,
        );
        let psi = KernelFunction::new(
            (2..=n).map(|k| self.u_at(k)).collect(),
            (1..=n).map(|k| self.v_at(k)).collect(),
            self.j,
        );
        (phi, psi)
    }

    /// Analytic coefficient weight `gamma_k = lambda_k [k]^m - alpha u_k [k]^n`
    /// for `k >= 2`.
    pub fn gamma(&self, k: u32) -> f64 {
        self.lambda_at(k) * pq::bracket_pow(k, self.m, self.pq)
            - self.alpha * self.u_at(k) * pq::bracket_pow(k, self.n, self.pq)
    }

    /// Co-analytic weight `phi_k = mu_k [k]^m - (-1)^E alpha v_k [k]^n`
    /// for `k >= 1`.
    pub fn phi(&self, k: u32) -> f64 {
        self.mu_at(k) * pq::bracket_pow(k, self.m, self.pq)
            - self.sign_exponent().factor()
                * self.alpha
                * self.v_at(k)
                * pq::bracket_pow(k, self.n, self.pq)
    }

    /// The coefficient functional
    /// `sum gamma_k |a_k| / (1-alpha) + sum phi_k |b_k| / (1-alpha)`;
    /// membership threshold is 1.
    pub fn functional(&self, f: &HarmonicFunction) -> f64 {
        let scale = 1.0 - self.alpha;
        let mut total = 0.0;
        for (idx, ak) in f.a_tail().iter().enumerate() {
            let k = idx as u32 + 2;
            total += self.gamma(k) * ak.norm() / scale;
        }
        for (idx, bk) in f.b_all().iter().enumerate() {
            let k = idx as u32 + 1;
            total += self.phi(k) * bk.norm() / scale;
        }
        total
    }

    /// Sufficient membership test: functional at most `1 + tol` certifies
    /// the function belongs to the family (sufficiency direction only).
    pub fn is_member_sufficient(&self, f: &HarmonicFunction) -> bool {
        self.functional(f) <= 1.0 + MEMBERSHIP_TOL
    }

    /// Exact membership for sign-patterned functions: the analytic tail
    /// carries sign `-1`, the co-analytic part sign `(-1)^{m+i-1}` with
    /// `|b_1| < 1`, and the coefficient functional is at most 1. For such
    /// functions the inequality is necessary and sufficient.
    pub fn is_member_t(&self, f: &HarmonicFunction) -> bool {
        self.has_sign_pattern(f) && self.is_member_sufficient(f)
    }

    /// The sign pattern alone (no functional bound).
    pub fn has_sign_pattern(&self, f: &HarmonicFunction) -> bool {
        let co_sign = if (self.m as i64 + self.i as i64 - 1).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let patterned = |c: Complex64, sign: f64| c.im == 0.0 && sign * c.re >= 0.0;
        f.a_tail().iter().all(|&ak| patterned(ak, -1.0))
            && f.b_all().iter().all(|&bk| patterned(bk, co_sign))
            && f.b_coeff(1).norm() < 1.0
    }

    /// The defining ratio `(L^m f * Phi)/(L^n f * Psi)` at `z`; membership
    /// means its real part exceeds `alpha` on the disc. At `z = 0` both
    /// series reduce to their normalized leading term and the ratio is 1.
    pub fn ratio(&self, f: &HarmonicFunction, z: Complex64) -> Result<Complex64, FamilyError> {
        RatioSeries::new(self, f).at(z)
    }
}

/// The convolved numerator/denominator pair of the defining ratio,
/// materialized once so grids can evaluate it repeatedly.
pub struct RatioSeries {
    num: HarmonicFunction,
    den: HarmonicFunction,
}

impl RatioSeries {
    pub fn new(spec: &FamilySpec, f: &HarmonicFunction) -> Self {
        let trunc = spec.trunc.max(f.truncation());
        let f = f.with_truncation(trunc);
        let (phi, psi) = spec.kernels();
        let num = f.salagean(spec.m, spec.pq).hadamard(&phi.to_harmonic(trunc));
        let den = f.salagean(spec.n, spec.pq).hadamard(&psi.to_harmonic(trunc));
        RatioSeries { num, den }
    }

    pub fn at(&self, z: Complex64) -> Result<Complex64, FamilyError> {
        if z == Complex64::new(0.0, 0.0) {
            // Both series are normalized to leading term z.
            return Ok(Complex64::new(1.0, 0.0));
        }
        let den = self.den.evaluate_unchecked(z);
        if den.norm() < DENOMINATOR_TOL {
            return Err(FamilyError::ZeroDenominator { witness: z });
        }
        Ok(self.num.evaluate_unchecked(z) / den)
    }
}

/// Parse a preset name as used in job configurations. `m`, `n`, `q` feed
/// the parameterized presets; convolution kernels are supplied separately.
pub fn parse_preset_name(
    name: &str,
    m: Option<u32>,
    n: Option<u32>,
    q: Option<f64>,
) -> Result<Preset, FamilyError> {
    match name {
        "starlike" => Ok(Preset::Starlike),
        "convex" => Ok(Preset::Convex),
        "starlike_q" => Ok(Preset::StarlikeQ { q: q.unwrap_or(1.0) }),
        "convex_q" => Ok(Preset::ConvexQ { q: q.unwrap_or(1.0) }),
        "yalcin" => Ok(Preset::Yalcin {
            m: m.unwrap_or(1),
            n: n.unwrap_or(0),
        }),
        other => Err(FamilyError::UnknownPreset { name: other.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn starlike(alpha: f64) -> FamilySpec {
        FamilySpec::preset(Preset::Starlike, alpha).unwrap()
    }

    fn convex(alpha: f64) -> FamilySpec {
        FamilySpec::preset(Preset::Convex, alpha).unwrap()
    }

    fn real_fn(a: &[f64], b: &[f64]) -> HarmonicFunction {
        HarmonicFunction::from_real(a, b).unwrap()
    }

    #[test]
    fn preset_parameters() {
        let s = starlike(0.0);
        assert_eq!((s.m, s.n, s.i, s.j), (1, 0, 1, 0));
        assert_eq!(s.lambda, CoeffSeq::K);
        assert_eq!(s.mu, CoeffSeq::K);
        assert_eq!(s.u, CoeffSeq::One);
        assert_eq!(s.v, CoeffSeq::One);
        assert_eq!(s.pq, PQParams::classical());

        let k = convex(0.0);
        assert_eq!((k.m, k.n, k.i, k.j), (2, 1, 0, 1));
        assert_eq!(k.lambda, CoeffSeq::KSquared);
        assert_eq!(k.u, CoeffSeq::K);

        let conv = FamilySpec::preset(
            Preset::Convolution {
                lambda: CoeffSeq::KSquared,
                mu: CoeffSeq::KSquared,
                i: 0,
                u: CoeffSeq::K,
                v: CoeffSeq::K,
                j: 1,
            },
            0.0,
        )
        .unwrap();
        assert_eq!((conv.m, conv.n), (0, 0));
    }

    #[test]
    fn kernels_read_off_generating_functions() {
        let (phi, psi) = starlike(0.0).kernels();
        assert_eq!(phi.sign(), 1);
        assert_eq!(psi.sign(), 0);
        assert_eq!(phi.analytic_weight(5), 5.0);
        assert_eq!(phi.co_analytic_weight(3), 3.0);
        assert_eq!(psi.analytic_weight(5), 1.0);
        assert_eq!(psi.co_analytic_weight(3), 1.0);

        // Explicit arrays pass through unchanged.
        let spec = FamilySpec {
            lambda: CoeffSeq::Explicit(vec![7.0, 9.0]),
            trunc: 3,
            ..starlike(0.0)
        };
        let (phi, _) = spec.kernels();
        assert_eq!(phi.analytic_weight(2), 7.0);
        assert_eq!(phi.analytic_weight(3), 9.0);
    }

    #[test]
    fn gamma_phi_known_values() {
        assert_eq!(starlike(0.0).gamma(2), 4.0);
        assert_eq!(starlike(0.0).phi(2), 4.0);
        assert_eq!(starlike(0.5).gamma(2), 3.5);
        assert_eq!(convex(0.0).gamma(2), 16.0);
        let sq = FamilySpec::preset(Preset::StarlikeQ { q: 0.5 }, 0.0).unwrap();
        assert_eq!(sq.gamma(2), 3.0);
    }

    #[test]
    fn functional_known_values() {
        let s = starlike(0.0);
        assert_eq!(s.functional(&HarmonicFunction::identity(8)), 0.0);
        assert_eq!(s.functional(&real_fn(&[-0.25], &[])), 1.0);
        assert_eq!(s.functional(&real_fn(&[-0.125], &[0.0, -0.125])), 1.0);
        let sq = FamilySpec::preset(Preset::StarlikeQ { q: 0.5 }, 0.0).unwrap();
        let f = real_fn(&[-(1.0 / 3.0)], &[]);
        assert!((sq.functional(&f) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn membership_sufficient() {
        let s = starlike(0.0);
        assert!(s.is_member_sufficient(&HarmonicFunction::identity(4)));
        assert!(s.is_member_sufficient(&real_fn(&[-0.25], &[])));
        assert!(!s.is_member_sufficient(&real_fn(&[-0.3], &[])));
    }

    #[test]
    fn membership_t_family() {
        let s = starlike(0.0);
        // m + i - 1 = 1 for starlike: co-analytic sign is -1.
        assert!(s.is_member_t(&real_fn(&[-0.25], &[])));
        assert!(!s.is_member_t(&real_fn(&[0.25], &[])));
        // |b_1| = 1 is excluded even though the pattern matches.
        assert!(!s.is_member_t(&real_fn(&[], &[-1.0])));
        assert!(s.is_member_t(&real_fn(&[], &[-0.5])));
    }

    #[test]
    fn ratio_known_values() {
        let s = starlike(0.0);
        let id = HarmonicFunction::identity(8);
        for &z in &[c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.6)] {
            assert!((s.ratio(&id, z).unwrap() - 1.0).norm() < 1e-14);
        }

        let f = real_fn(&[-0.25], &[]);
        let got = s.ratio(&f, c(0.5, 0.0)).unwrap();
        assert!((got - c(4.0 / 7.0, 0.0)).norm() < 1e-14);

        // Sharpness probe: Re -> 0+ as z -> 1- along the reals.
        let near = s.ratio(&f, c(0.9999, 0.0)).unwrap();
        assert!(near.re > 0.0 && near.re < 2e-4);
    }

    #[test]
    fn ratio_zero_denominator() {
        let s = starlike(0.0);
        // den = z(1 - 0.5 - 0.6 z) on the reals vanishes at z = 5/6.
        let f = real_fn(&[-0.6], &[-0.5]);
        let z = c(5.0 / 6.0, 0.0);
        assert!(matches!(
            s.ratio(&f, z),
            Err(FamilyError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn preset_name_parsing() {
        assert_eq!(parse_preset_name("starlike", None, None, None).unwrap(), Preset::Starlike);
        assert_eq!(
            parse_preset_name("yalcin", Some(3), Some(1), None).unwrap(),
            Preset::Yalcin { m: 3, n: 1 }
        );
        assert!(matches!(
            parse_preset_name("starlik", None, None, None),
            Err(FamilyError::UnknownPreset { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(FamilySpec::preset(Preset::Starlike, 1.0).is_err());
        assert!(FamilySpec::preset(Preset::Starlike, -0.1).is_err());
        assert!(FamilySpec::preset(Preset::StarlikeQ { q: 0.0 }, 0.0).is_err());

        // lambda_k > u_k fails when both are constant 1.
        let bad = FamilySpec {
            lambda: CoeffSeq::One,
            ..starlike(0.0)
        };
        assert!(bad.validate().is_err());

        // m < n rejected.
        let bad = FamilySpec { m: 0, n: 1, ..starlike(0.0) };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn validation_warnings_for_relaxed_constraints() {
        let warns = starlike(0.0).validate().unwrap();
        assert!(warns.iter().any(|w| w.contains("mu_1 = v_1")));

        let conv = FamilySpec::preset(
            Preset::Convolution {
                lambda: CoeffSeq::KSquared,
                mu: CoeffSeq::KSquared,
                i: 0,
                u: CoeffSeq::K,
                v: CoeffSeq::K,
                j: 1,
            },
            0.0,
        )
        .unwrap();
        let warns = conv.validate().unwrap();
        assert!(warns.iter().any(|w| w.contains("m = n")));
    }

    #[test]
    fn functional_reduces_to_classical_weights() {
        // At p = q = 1, lambda = mu = k, u = v = 1, m = 1, n = 0 the
        // weights are k^2 - alpha for both parts.
        for &alpha in &[0.0, 0.3, 0.7] {
            let s = starlike(alpha);
            for k in 2..=10u32 {
                let want = (k as f64).powi(2) - alpha;
                assert!((s.gamma(k) - want).abs() < 1e-12);
                assert!((s.phi(k) - want).abs() < 1e-12);
            }
            assert!((s.phi(1) - (1.0 - alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_exponent_parity() {
        for m in 0..4u32 {
            for n in 0..4u32 {
                for i in 0..2u8 {
                    for j in 0..2u8 {
                        let e = SignExponent::new(m, n, i, j);
                        let split = (if (n + j as u32).is_multiple_of(2) { 1.0 } else { -1.0 })
                            * (if (m + i as u32).is_multiple_of(2) { 1.0 } else { -1.0 });
                        assert_eq!(e.factor(), split);
                        assert!(e.factor() == 1.0 || e.factor() == -1.0);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn functional_is_absolutely_homogeneous(
            a in proptest::collection::vec(-0.4f64..=0.4, 4),
            b in proptest::collection::vec(-0.4f64..=0.4, 5),
            scale in 0.0f64..=3.0,
            alpha in 0.0f64..=0.9,
        ) {
            let s = starlike(alpha);
            let f = real_fn(&a, &b);
            let scaled: Vec<f64> = a.iter().map(|x| x * scale).collect();
            let scaled_b: Vec<f64> = b.iter().map(|x| x * scale).collect();
            let g = real_fn(&scaled, &scaled_b);
            let want = scale * s.functional(&f);
            prop_assert!((s.functional(&g) - want).abs() <= 1e-12 * want.max(1.0));
        }

        #[test]
        fn single_coefficient_threshold_is_sharp(
            k in 2u32..=16,
            alpha in 0.0f64..=0.9,
            convex_kind in proptest::bool::ANY,
        ) {
            let spec = if convex_kind { convex(alpha) } else { starlike(alpha) };
            let mut a = vec![0.0; k as usize - 1];
            a[k as usize - 2] = -(1.0 - alpha) / spec.gamma(k);
            let f = real_fn(&a, &[]);
            prop_assert!((spec.functional(&f) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn ratio_is_one_at_origin(
            a in proptest::collection::vec(-0.2f64..=0.2, 3),
            b in proptest::collection::vec(-0.2f64..=0.2, 3),
        ) {
            let s = starlike(0.0);
            let f = real_fn(&a, &b);
            prop_assert_eq!(s.ratio(&f, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        }
    }
}
