//! JSON job configuration: parsing, invariant validation, and the
//! resolved [`JobConfig`] that drives [`crate::job::run`].
//!
//! A config supplies the family (preset name plus overrides, or explicit
//! sequences), at most one function source, the action, and the numeric
//! knobs. Parsing resolves presets into explicit specs, so
//! `parse(serialize(config))` is the identity on valid configs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::DistortionMode;
use crate::extremal::WeightVector;
use crate::family::{self, CoeffSeq, FamilySpec, Preset};
use crate::pq::PQParams;
use crate::verify::GridSpec;

/// Default membership tolerance exposed as `tol`.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Malformed JSON text.
    Parse { message: String },
    /// Well-formed JSON violating an invariant; `path` names the field.
    Validation { path: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { message } => write!(f, "config parse error: {message}"),
            ConfigError::Validation { path, message } => {
                write!(f, "invalid config at `{path}`: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Check,
    Bounds,
    Extremal,
    Verify,
    Render,
    Bracket,
}

/// Which extreme point to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremeKind {
    H,
    G,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremeRef {
    pub kind: ExtremeKind,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsSource {
    /// Signed analytic coefficients, positional from k = 2.
    #[serde(default)]
    pub a: Vec<f64>,
    /// Signed co-analytic coefficients, positional from k = 1.
    #[serde(default)]
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSource {
    pub weights: WeightVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremeSource {
    pub extreme: ExtremeRef,
}

/// Exactly one way of naming the working function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSource {
    Extreme(ExtremeSource),
    Weights(WeightsSource),
    Coeffs(CoeffsSource),
}

impl Default for FunctionSource {
    fn default() -> Self {
        FunctionSource::Coeffs(CoeffsSource { a: Vec::new(), b: Vec::new() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Ppm,
    Svg,
}

/// Polar-grid rendering parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    #[serde(default = "default_circles")]
    pub circles: usize,
    #[serde(default = "default_rays")]
    pub rays: usize,
    /// Sample points per drawn curve.
    #[serde(default = "default_curve_samples")]
    pub samples: usize,
    #[serde(default = "default_image_side")]
    pub width: u32,
    #[serde(default = "default_image_side")]
    pub height: u32,
    #[serde(default = "default_render_format")]
    pub format: RenderFormat,
    /// Outermost source-grid radius.
    #[serde(default = "default_render_r_max")]
    pub r_max: f64,
}

fn default_circles() -> usize {
    12
}
fn default_rays() -> usize {
    16
}
fn default_curve_samples() -> usize {
    512
}
fn default_image_side() -> u32 {
    800
}
fn default_render_format() -> RenderFormat {
    RenderFormat::Ppm
}
fn default_render_r_max() -> f64 {
    0.95
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            circles: default_circles(),
            rays: default_rays(),
            samples: default_curve_samples(),
            width: default_image_side(),
            height: default_image_side(),
            format: default_render_format(),
            r_max: default_render_r_max(),
        }
    }
}

/// A fully resolved job: validated family, one function source, one action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub family: FamilySpec,
    #[serde(default)]
    pub function: FunctionSource,
    pub action: Action,
    pub grid: GridSpec,
    pub tol: f64,
    pub mode: DistortionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub render: RenderSpec,
}

// ---------------------------------------------------------------------
// Raw (permissive) layer resolved into JobConfig.

#[derive(Deserialize)]
struct RawConfig {
    family: RawFamily,
    #[serde(default)]
    function: Option<FunctionSource>,
    action: Action,
    #[serde(default)]
    grid: Option<RawGrid>,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    mode: Option<DistortionMode>,
    #[serde(default)]
    output: Option<String>,
    #[serde(default)]
    render: Option<RenderSpec>,
}

#[derive(Deserialize, Default)]
struct RawFamily {
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    m: Option<u32>,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    i: Option<u8>,
    #[serde(default)]
    j: Option<u8>,
    #[serde(default)]
    p: Option<f64>,
    #[serde(default)]
    q: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    lambda: Option<CoeffSeq>,
    #[serde(default)]
    mu: Option<CoeffSeq>,
    #[serde(default)]
    u: Option<CoeffSeq>,
    #[serde(default)]
    v: Option<CoeffSeq>,
    #[serde(default)]
    trunc: Option<usize>,
}

#[derive(Deserialize, Default)]
struct RawGrid {
    #[serde(default)]
    radii: Option<Vec<f64>>,
    #[serde(default)]
    angles_per_circle: Option<usize>,
    #[serde(default)]
    r_max: Option<f64>,
}

/// Parse and validate a JSON job configuration. Returns the resolved
/// config together with the deviation warnings it triggers (relaxed
/// sequence or order constraints).
pub fn parse_config(text: &str) -> Result<(JobConfig, Vec<String>), ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::Parse { message: e.to_string() })?;
    let raw: RawConfig = serde_json::from_value(value)
        .map_err(|e| invalid("<shape>", e.to_string()))?;
    resolve(raw)
}

/// Serialize a resolved config; [`parse_config`] of the result is identity.
pub fn serialize_config(config: &JobConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serialization cannot fail")
}

fn resolve(raw: RawConfig) -> Result<(JobConfig, Vec<String>), ConfigError> {
    let family = resolve_family(raw.family)?;
    let warnings = family
        .validate()
        .map_err(|e| invalid("family", e.to_string()))?;

    let function = raw.function.unwrap_or_default();
    validate_function(&function, &family)?;

    let grid = resolve_grid(raw.grid.unwrap_or_default())?;

    let tol = raw.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("tol", format!("tolerance {tol} must be positive")));
    }

    let render = raw.render.unwrap_or_default();
    if render.circles < 8 || render.rays < 8 {
        return Err(invalid("render", "grid density must be at least 8 circles and 8 rays"));
    }
    if render.samples < 16 {
        return Err(invalid("render.samples", "need at least 16 samples per curve"));
    }
    if !(render.r_max > 0.0 && render.r_max < 1.0) {
        return Err(invalid("render.r_max", "source radius must lie in (0, 1)"));
    }
    if render.width < 16 || render.height < 16 {
        return Err(invalid("render", "image must be at least 16x16"));
    }

    let config = JobConfig {
        family,
        function,
        action: raw.action,
        grid,
        tol,
        mode: raw.mode.unwrap_or_default(),
        output: raw.output,
        render,
    };
    if config.action == Action::Render && config.output.is_none() {
        return Err(invalid("output", "render action requires an output path"));
    }
    Ok((config, warnings))
}

fn resolve_family(raw: RawFamily) -> Result<FamilySpec, ConfigError> {
    let alpha = raw.alpha.unwrap_or(0.0);
    let mut spec = if let Some(name) = &raw.preset {
        let preset = if name == "convolution" {
            Preset::Convolution {
                lambda: raw.lambda.clone().ok_or_else(|| {
                    invalid("family.lambda", "convolution preset requires explicit kernels")
                })?,
                mu: raw.mu.clone().ok_or_else(|| invalid("family.mu", "missing"))?,
                i: raw.i.unwrap_or(0),
                u: raw.u.clone().ok_or_else(|| invalid("family.u", "missing"))?,
                v: raw.v.clone().ok_or_else(|| invalid("family.v", "missing"))?,
                j: raw.j.unwrap_or(0),
            }
        } else {
            family::parse_preset_name(name, raw.m, raw.n, raw.q)
                .map_err(|e| invalid("family.preset", e.to_string()))?
        };
        FamilySpec::preset(preset, alpha).map_err(|e| invalid("family", e.to_string()))?
    } else {
        let require = |field: &str, missing: bool| {
            if missing {
                Err(invalid(
                    &format!("family.{field}"),
                    "required without a preset",
                ))
            } else {
                Ok(())
            }
        };
        require("m", raw.m.is_none())?;
        require("n", raw.n.is_none())?;
        require("i", raw.i.is_none())?;
        require("j", raw.j.is_none())?;
        require("lambda", raw.lambda.is_none())?;
        require("mu", raw.mu.is_none())?;
        require("u", raw.u.is_none())?;
        require("v", raw.v.is_none())?;
        FamilySpec {
            m: raw.m.unwrap(),
            n: raw.n.unwrap(),
            i: raw.i.unwrap(),
            j: raw.j.unwrap(),
            alpha,
            pq: PQParams::classical(),
            lambda: raw.lambda.clone().unwrap(),
            mu: raw.mu.clone().unwrap(),
            u: raw.u.clone().unwrap(),
            v: raw.v.clone().unwrap(),
            trunc: crate::series::DEFAULT_TRUNCATION,
        }
    };

    // Field overrides apply on top of the preset expansion.
    if raw.preset.is_some() {
        if let Some(i) = raw.i {
            spec.i = i;
        }
        if let Some(j) = raw.j {
            spec.j = j;
        }
        if let Some(lambda) = raw.lambda {
            spec.lambda = lambda;
        }
        if let Some(mu) = raw.mu {
            spec.mu = mu;
        }
        if let Some(u) = raw.u {
            spec.u = u;
        }
        if let Some(v) = raw.v {
            spec.v = v;
        }
    }
    let p = raw.p.unwrap_or(spec.pq.p());
    let q = raw.q.unwrap_or(spec.pq.q());
    spec.pq = PQParams::new(p, q).map_err(|e| invalid("family.p/q", e.to_string()))?;
    if let Some(trunc) = raw.trunc {
        if trunc < 1 {
            return Err(invalid("family.trunc", "truncation must be at least 1"));
        }
        spec.trunc = trunc;
    }
    Ok(spec)
}

fn validate_function(function: &FunctionSource, family: &FamilySpec) -> Result<(), ConfigError> {
    match function {
        FunctionSource::Coeffs(c) => {
            if c.a.len() > family.trunc.saturating_sub(1) {
                return Err(invalid(
                    "function.a",
                    format!("{} coefficients exceed truncation {}", c.a.len(), family.trunc),
                ));
            }
            if c.b.len() > family.trunc {
                return Err(invalid(
                    "function.b",
                    format!("{} coefficients exceed truncation {}", c.b.len(), family.trunc),
                ));
            }
            if let Some(bad) = c.a.iter().chain(&c.b).find(|x| !x.is_finite()) {
                return Err(invalid("function", format!("non-finite coefficient {bad}")));
            }
        }
        FunctionSource::Weights(w) => {
            if w.weights.x.len() > family.trunc || w.weights.y.len() > family.trunc {
                return Err(invalid("function.weights", "weight indices exceed truncation"));
            }
            w.weights
                .validate()
                .map_err(|e| invalid("function.weights", e.to_string()))?;
        }
        FunctionSource::Extreme(e) => {
            if e.extreme.k < 1 || e.extreme.k > family.trunc {
                return Err(invalid(
                    "function.extreme.k",
                    format!("k = {} outside 1..={}", e.extreme.k, family.trunc),
                ));
            }
        }
    }
    Ok(())
}

fn resolve_grid(raw: RawGrid) -> Result<GridSpec, ConfigError> {
    let r_max = raw.r_max.unwrap_or(0.999);
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(invalid("grid.r_max", format!("{r_max} outside (0, 1)")));
    }
    let angles = raw.angles_per_circle.unwrap_or(360);
    if angles < 8 {
        return Err(invalid("grid.angles_per_circle", "need at least 8 angles"));
    }
    let grid = match raw.radii {
        Some(radii) => {
            if radii.is_empty() {
                return Err(invalid("grid.radii", "need at least one radius"));
            }
            if let Some(bad) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
                return Err(invalid("grid.radii", format!("radius {bad} outside (0, 1)")));
            }
            GridSpec {
                radii,
                angles_per_circle: angles,
                r_max,
            }
        }
        None => GridSpec::uniform(12, angles, r_max),
    };
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_preset_config() {
        let text = r#"{"family":{"preset":"starlike","alpha":0.0},
                       "function":{"a":[-0.25],"b":[]},
                       "action":"check"}"#;
        let (cfg, warnings) = parse_config(text).unwrap();
        assert_eq!(cfg.action, Action::Check);
        assert_eq!(cfg.family.m, 1);
        assert_eq!(cfg.family.trunc, 64);
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert!(warnings.iter().any(|w| w.contains("mu_1 = v_1")));
        match &cfg.function {
            FunctionSource::Coeffs(c) => assert_eq!(c.a, vec![-0.25]),
            other => panic!("unexpected source {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_alpha_out_of_range() {
        let text = r#"{"family":{"preset":"starlike","alpha":1.0},"action":"check"}"#;
        match parse_config(text) {
            Err(ConfigError::Validation { path, .. }) => assert_eq!(path, "family"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_malformed_json() {
        assert!(matches!(
            parse_config("{not json"),
            Err(ConfigError::Parse { .. })
        ));
    }

    #[test]
    fn explicit_family_matches_q_preset() {
        let explicit = r#"{"family":{"m":1,"n":0,"i":1,"j":0,"p":1.0,"q":0.5,"alpha":0.0,
                                     "lambda":"k","mu":"k","u":"1","v":"1"},
                           "action":"check"}"#;
        let (cfg, _) = parse_config(explicit).unwrap();
        let preset = FamilySpec::preset(Preset::StarlikeQ { q: 0.5 }, 0.0).unwrap();
        assert_eq!(cfg.family, preset);
    }

    #[test]
    fn round_trip_identity() {
        let text = r#"{"family":{"preset":"convex_q","q":0.75,"alpha":0.2,"trunc":32},
                       "function":{"weights":{"x":[0.25,0.25],"y":[0.0,0.5]}},
                       "action":"verify",
                       "grid":{"r_max":0.9,"angles_per_circle":90},
                       "tol":1e-9,
                       "mode":"statement"}"#;
        let (cfg, _) = parse_config(text).unwrap();
        let serialized = serialize_config(&cfg);
        let (back, _) = parse_config(&serialized).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn function_sources_are_mutually_exclusive() {
        let text = r#"{"family":{"preset":"starlike"},
                       "function":{"a":[-0.1],"weights":{"x":[1.0]}},
                       "action":"check"}"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn missing_function_defaults_to_identity() {
        let text = r#"{"family":{"preset":"starlike"},"action":"bounds"}"#;
        let (cfg, _) = parse_config(text).unwrap();
        assert_eq!(cfg.function, FunctionSource::default());
    }

    #[test]
    fn render_requires_output() {
        let text = r#"{"family":{"preset":"starlike"},"action":"render"}"#;
        match parse_config(text) {
            Err(ConfigError::Validation { path, .. }) => assert_eq!(path, "output"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_sequences_validate_against_truncation() {
        // Explicit lambda too short for the truncation: lambda_k = 0 < u_k.
        let text = r#"{"family":{"m":1,"n":0,"i":1,"j":0,"alpha":0.0,
                                 "lambda":[5.0,5.0],"mu":"k","u":"1","v":"1","trunc":8},
                       "action":"check"}"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn preset_overrides_apply() {
        let text = r#"{"family":{"preset":"starlike","q":0.5,"trunc":16},"action":"check"}"#;
        let (cfg, _) = parse_config(text).unwrap();
        assert_eq!(cfg.family.pq, PQParams::new(1.0, 0.5).unwrap());
        assert_eq!(cfg.family.trunc, 16);
    }

    #[test]
    fn function_exceeding_truncation_rejected() {
        let text = r#"{"family":{"preset":"starlike","trunc":4},
                       "function":{"a":[-0.1,0.0,0.0,0.0,0.0]},
                       "action":"check"}"#;
        match parse_config(text) {
            Err(ConfigError::Validation { path, .. }) => assert_eq!(path, "function.a"),
            other => panic!("{other:?}"),
        }
    }
}
