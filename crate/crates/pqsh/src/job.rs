//! Job execution: dispatch a resolved [`JobConfig`] to the library,
//! assemble the JSON report, and map outcomes onto exit codes
//! (0 pass, 1 verification failure, 2 input or environment error).

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use crate::bounds;
use crate::config::{Action, ExtremeKind, FunctionSource, JobConfig};
use crate::extremal::{self, WeightVector};
use crate::pq;
use crate::render;
use crate::series::HarmonicFunction;
use crate::verify;

/// Exit statuses of the job surface.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// A finished job: the JSON report plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: Value,
    pub exit_code: i32,
}

/// Execute a job with no pre-existing warnings.
pub fn run(config: &JobConfig) -> RunOutcome {
    run_with_warnings(config, Vec::new())
}

/// Execute a job, folding caller warnings (e.g. flag-merge notices) into
/// the report.
pub fn run_with_warnings(config: &JobConfig, mut warnings: Vec<String>) -> RunOutcome {
    let start = Instant::now();
    if let Ok(spec_warnings) = config.family.validate() {
        warnings.extend(spec_warnings);
    }

    let function = match materialize_function(config) {
        Ok(f) => f,
        Err(message) => {
            return finish(
                config,
                json!({ "error": message }),
                warnings,
                EXIT_INPUT_ERROR,
                start,
            );
        }
    };
    let b1_abs = function.b_coeff(1).norm();
    if b1_abs >= 1.0 {
        warnings.push(format!(
            "|b_1| = {b1_abs} >= 1: boundary element of the hull, not univalent"
        ));
    }

    let (results, exit_code) = match config.action {
        Action::Check => action_check(config, &function),
        Action::Bounds => action_bounds(config, b1_abs),
        Action::Extremal => action_extremal(config, &function),
        Action::Verify => action_verify(config, &function),
        Action::Render => action_render(config, &function),
        Action::Bracket => action_bracket(config),
    };
    finish(config, results, warnings, exit_code, start)
}

fn finish(
    config: &JobConfig,
    results: Value,
    warnings: Vec<String>,
    exit_code: i32,
    start: Instant,
) -> RunOutcome {
    let report = json!({
        "action": config.action,
        "inputs": serde_json::to_value(config).expect("config serializes"),
        "results": results,
        "warnings": warnings,
        "timings": { "total_ms": start.elapsed().as_secs_f64() * 1e3 },
    });
    RunOutcome { report, exit_code }
}

/// Build the working function from whichever source the config names.
pub fn materialize_function(config: &JobConfig) -> Result<HarmonicFunction, String> {
    let spec = &config.family;
    match &config.function {
        FunctionSource::Coeffs(c) => HarmonicFunction::from_real(&c.a, &c.b)
            .map(|f| f.with_truncation(spec.trunc))
            .map_err(|e| e.to_string()),
        FunctionSource::Weights(w) => {
            extremal::combine(spec, &w.weights).map_err(|e| e.to_string())
        }
        FunctionSource::Extreme(e) => Ok(match e.extreme.kind {
            ExtremeKind::H => extremal::extreme_h(spec, e.extreme.k),
            ExtremeKind::G => extremal::extreme_g(spec, e.extreme.k),
        }),
    }
}

fn real_coeff_arrays(f: &HarmonicFunction) -> (Vec<f64>, Vec<f64>) {
    let mut a: Vec<f64> = f.a_tail().iter().map(|c| c.re).collect();
    let mut b: Vec<f64> = f.b_all().iter().map(|c| c.re).collect();
    while a.last() == Some(&0.0) {
        a.pop();
    }
    while b.last() == Some(&0.0) {
        b.pop();
    }
    (a, b)
}

fn action_check(config: &JobConfig, f: &HarmonicFunction) -> (Value, i32) {
    let spec = &config.family;
    let functional = spec.functional(f);
    (
        json!({
            "functional": functional,
            "member_sufficient": functional <= 1.0 + config.tol,
            "sign_pattern": spec.has_sign_pattern(f),
            "member_t": spec.has_sign_pattern(f) && functional <= 1.0 + config.tol,
        }),
        EXIT_PASS,
    )
}

fn action_bounds(config: &JobConfig, b1_abs: f64) -> (Value, i32) {
    let spec = &config.family;
    let mode = config.mode;
    let or_error = |r: Result<f64, bounds::BoundsError>| match r {
        Ok(v) => json!(v),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let coeff_table: Vec<Value> = (1..=8u32.min(spec.trunc as u32))
        .map(|k| match bounds::coeff_bounds(spec, k) {
            Ok(cb) => json!({ "k": k, "a_max": cb.a_max, "b_max": cb.b_max }),
            Err(e) => json!({ "k": k, "error": e.to_string() }),
        })
        .collect();
    let distortion_table: Vec<Value> = (1..=9)
        .map(|t| {
            let r = t as f64 / 10.0;
            match bounds::distortion(spec, b1_abs, r, mode) {
                Ok((lower, upper)) => json!({ "r": r, "lower": lower, "upper": upper }),
                Err(e) => json!({ "r": r, "error": e.to_string() }),
            }
        })
        .collect();
    (
        json!({
            "b1": b1_abs,
            "beta": bounds::beta(spec),
            "hypothesis_ok": bounds::check_hypothesis(spec, bounds::DEFAULT_HYPOTHESIS_DEPTH),
            "covering_radius": or_error(bounds::covering_radius(spec, b1_abs, mode)),
            "convexity_radius": or_error(bounds::convexity_radius(spec, b1_abs)),
            "coeff_bounds": coeff_table,
            "distortion": distortion_table,
        }),
        EXIT_PASS,
    )
}

fn action_extremal(config: &JobConfig, f: &HarmonicFunction) -> (Value, i32) {
    let spec = &config.family;
    let weights: WeightVector = match &config.function {
        FunctionSource::Weights(w) => w.weights.clone(),
        _ => match extremal::decompose(f, spec) {
            Ok(w) => w,
            Err(e) => {
                return (
                    json!({ "error": format!("cannot decompose: {e}") }),
                    EXIT_INPUT_ERROR,
                )
            }
        },
    };
    let (a, b) = real_coeff_arrays(f);
    let mut x = weights.x.clone();
    let mut y = weights.y.clone();
    while x.last() == Some(&0.0) {
        x.pop();
    }
    while y.last() == Some(&0.0) {
        y.pop();
    }
    (
        json!({
            "function": { "a": a, "b": b },
            "weights": { "x": x, "y": y },
            "functional": spec.functional(f),
        }),
        EXIT_PASS,
    )
}

fn action_verify(config: &JobConfig, f: &HarmonicFunction) -> (Value, i32) {
    let spec = &config.family;
    let re = verify::check_re_condition(f, spec, &config.grid, config.tol);
    let sense = verify::check_sense_preserving(f, &config.grid, config.tol);
    let mut all_passed = re.passed && sense.passed;

    let distortion = if spec.is_member_t(f)
        && bounds::check_hypothesis(spec, bounds::DEFAULT_HYPOTHESIS_DEPTH)
    {
        let rep = verify::check_distortion(f, spec, config.mode, &config.grid.radii, config.tol);
        all_passed &= rep.passed;
        serde_json::to_value(&rep).expect("report serializes")
    } else {
        json!({ "skipped": "function is not a sign-patterned member with valid hypothesis" })
    };

    let exit = if all_passed { EXIT_PASS } else { EXIT_VERIFICATION_FAILED };
    (
        json!({
            "re_condition": re,
            "sense_preserving": sense,
            "distortion": distortion,
            "passed": all_passed,
        }),
        exit,
    )
}

fn action_render(config: &JobConfig, f: &HarmonicFunction) -> (Value, i32) {
    let path = config.output.as_deref().unwrap_or("out.ppm");
    match render::render_to_file(f, &config.render, Path::new(path)) {
        Ok(bytes) => (
            json!({ "path": path, "bytes": bytes, "format": config.render.format }),
            EXIT_PASS,
        ),
        Err(e) => (json!({ "error": e.to_string() }), EXIT_INPUT_ERROR),
    }
}

fn action_bracket(config: &JobConfig) -> (Value, i32) {
    let spec = &config.family;
    let rows: Vec<Value> = (0..=spec.trunc as u32)
        .map(|k| {
            let mut row = json!({
                "k": k,
                "bracket": pq::bracket(k, spec.pq),
                "bracket_m": pq::bracket_pow(k, spec.m, spec.pq),
                "bracket_n": pq::bracket_pow(k, spec.n, spec.pq),
            });
            let obj = row.as_object_mut().expect("row is an object");
            if k >= 2 {
                obj.insert("gamma".into(), json!(spec.gamma(k)));
            }
            if k >= 1 {
                obj.insert("phi".into(), json!(spec.phi(k)));
            }
            row
        })
        .collect();
    (json!({ "table": rows }), EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn run_json(text: &str) -> RunOutcome {
        let (cfg, warnings) = parse_config(text).expect("valid config");
        run_with_warnings(&cfg, warnings)
    }

    #[test]
    fn check_action_known_answer() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.25],"b":[]},
                "action":"check"}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        let results = &out.report["results"];
        assert_eq!(results["functional"], 1.0);
        assert_eq!(results["member_sufficient"], true);
        assert_eq!(results["member_t"], true);
    }

    #[test]
    fn bounds_action_known_answer() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.25],"b":[]},
                "action":"bounds"}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        let results = &out.report["results"];
        assert_eq!(results["beta"], 4.0);
        assert_eq!(results["covering_radius"], 0.75);
        assert_eq!(results["convexity_radius"], 0.5);
        assert_eq!(results["hypothesis_ok"], true);
        assert_eq!(results["b1"], 0.0);
    }

    #[test]
    fn verify_action_flags_nonmember() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.3],"b":[]},
                "action":"verify",
                "grid":{"r_max":0.99},
                "tol":1e-9}"#,
        );
        assert_eq!(out.exit_code, EXIT_VERIFICATION_FAILED);
        let re = &out.report["results"]["re_condition"];
        assert_eq!(re["passed"], false);
        // Complex witnesses serialize as [re, im] pairs.
        assert!(re["witness"][0].as_f64().unwrap() > 5.0 / 6.0);
    }

    #[test]
    fn verify_action_passes_member() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.25],"b":[]},
                "action":"verify",
                "tol":1e-9}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        assert_eq!(out.report["results"]["passed"], true);
        // T-member with valid hypothesis: distortion sub-check runs.
        assert_eq!(out.report["results"]["distortion"]["passed"], true);
    }

    #[test]
    fn extremal_action_round_trips() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"weights":{"x":[0.0,0.5],"y":[0.0,0.5]}},
                "action":"extremal"}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        let results = &out.report["results"];
        assert_eq!(results["function"]["a"][0], -0.125);
        assert_eq!(results["function"]["b"][1], -0.125);

        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.125],"b":[0.0,-0.125]},
                "action":"extremal"}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        assert_eq!(out.report["results"]["weights"]["x"][1], 0.5);
        assert_eq!(out.report["results"]["weights"]["y"][1], 0.5);
    }

    #[test]
    fn extremal_action_rejects_nonmember() {
        let out = run_json(
            r#"{"family":{"preset":"starlike","alpha":0.0},
                "function":{"a":[-0.3],"b":[]},
                "action":"extremal"}"#,
        );
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
    }

    #[test]
    fn bracket_action_table() {
        let out = run_json(
            r#"{"family":{"preset":"starlike_q","q":0.5,"trunc":8},"action":"bracket"}"#,
        );
        assert_eq!(out.exit_code, EXIT_PASS);
        let table = out.report["results"]["table"].as_array().unwrap();
        assert_eq!(table.len(), 9);
        assert_eq!(table[2]["bracket"], 1.5);
        assert_eq!(table[2]["gamma"], 3.0);
    }

    #[test]
    fn render_action_io_error_exits_2() {
        let out = run_json(
            r#"{"family":{"preset":"starlike"},
                "function":{"extreme":{"kind":"h","k":2}},
                "action":"render",
                "output":"/nonexistent-dir/grid.ppm"}"#,
        );
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
    }

    #[test]
    fn reports_carry_warnings_and_timings() {
        let out = run_json(r#"{"family":{"preset":"starlike"},"action":"check"}"#);
        assert!(out.report["warnings"]
            .as_array()
            .unwrap()
            .iter()
            .any(|w| w.as_str().unwrap().contains("mu_1 = v_1")));
        assert!(out.report["timings"]["total_ms"].as_f64().unwrap() >= 0.0);
    }
}
