//! `pqsh` command line: run one JSON-configured job against the harmonic
//! family library and emit the machine-readable report on stdout.
//!
//! Flags mirror the JSON config fields and fill in whatever the config
//! file leaves unset; on a conflict the JSON value wins and a warning is
//! recorded in the report. Exit codes: 0 pass, 1 verification failure,
//! 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use pqsh::config::{parse_config, Action};
use pqsh::job;

#[derive(Parser)]
#[command(name = "pqsh", version, about = "Harmonic function families from twin-basic calculus: membership, bounds, extreme points, verification, rendering")]
struct Cli {
    /// JSON job configuration file. Omit to drive everything by flags.
    config: Option<PathBuf>,

    /// Action to run: check | bounds | extremal | verify | render | bracket.
    #[arg(long)]
    action: Option<String>,

    /// Family preset: starlike | convex | starlike_q | convex_q | yalcin | convolution.
    #[arg(long)]
    preset: Option<String>,

    /// Order bound in [0, 1).
    #[arg(long)]
    alpha: Option<f64>,

    /// Calculus parameter p in (0, 1].
    #[arg(long)]
    p: Option<f64>,

    /// Calculus parameter q in (0, p].
    #[arg(long)]
    q: Option<f64>,

    /// Operator order m (also feeds the yalcin preset).
    #[arg(long)]
    m: Option<u32>,

    /// Operator order n.
    #[arg(long)]
    n: Option<u32>,

    /// Series truncation order.
    #[arg(long)]
    trunc: Option<usize>,

    /// Comma-separated grid radii in (0, 1), e.g. "0.3,0.6,0.9".
    #[arg(long = "grid-radii")]
    grid_radii: Option<String>,

    /// Numeric tolerance for membership and grid checks.
    #[arg(long)]
    tol: Option<f64>,

    /// Distortion formula variant: proof | statement.
    #[arg(long)]
    mode: Option<String>,

    /// Output path: image file for render, report copy otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            let report = json!({ "error": message });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::from(job::EXIT_INPUT_ERROR as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    let mut doc: Value = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("config parse error: {e}"))?
        }
        None => json!({}),
    };
    if !doc.is_object() {
        return Err("config root must be a JSON object".into());
    }

    let mut merge_warnings = Vec::new();
    let mut set = |doc: &mut Value, path: &[&str], flag: &str, value: Value| {
        let mut node = &mut *doc;
        for key in &path[..path.len() - 1] {
            node = node
                .as_object_mut()
                .expect("object")
                .entry(key.to_string())
                .or_insert_with(|| json!({}));
        }
        let leaf = path[path.len() - 1];
        let obj = node.as_object_mut().expect("object");
        if obj.contains_key(leaf) {
            merge_warnings.push(format!(
                "config value for `{}` overrides --{flag}",
                path.join(".")
            ));
        } else {
            obj.insert(leaf.to_string(), value);
        }
    };

    if let Some(v) = &cli.action {
        set(&mut doc, &["action"], "action", json!(v));
    }
    if let Some(v) = &cli.preset {
        set(&mut doc, &["family", "preset"], "preset", json!(v));
    }
    if let Some(v) = cli.alpha {
        set(&mut doc, &["family", "alpha"], "alpha", json!(v));
    }
    if let Some(v) = cli.p {
        set(&mut doc, &["family", "p"], "p", json!(v));
    }
    if let Some(v) = cli.q {
        set(&mut doc, &["family", "q"], "q", json!(v));
    }
    if let Some(v) = cli.m {
        set(&mut doc, &["family", "m"], "m", json!(v));
    }
    if let Some(v) = cli.n {
        set(&mut doc, &["family", "n"], "n", json!(v));
    }
    if let Some(v) = cli.trunc {
        set(&mut doc, &["family", "trunc"], "trunc", json!(v));
    }
    if let Some(list) = &cli.grid_radii {
        let radii: Result<Vec<f64>, _> = list.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let radii = radii.map_err(|e| format!("cannot parse --grid-radii: {e}"))?;
        set(&mut doc, &["grid", "radii"], "grid-radii", json!(radii));
    }
    if let Some(v) = cli.tol {
        set(&mut doc, &["tol"], "tol", json!(v));
    }
    if let Some(v) = &cli.mode {
        set(&mut doc, &["mode"], "mode", json!(v));
    }
    if let Some(v) = &cli.out {
        set(&mut doc, &["output"], "out", json!(v.display().to_string()));
    }

    let text = serde_json::to_string(&doc).expect("merged config serializes");
    let (config, mut warnings) = parse_config(&text).map_err(|e| e.to_string())?;
    warnings.splice(0..0, merge_warnings);

    let outcome = job::run_with_warnings(&config, warnings);
    let rendered = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    println!("{rendered}");
    if config.action != Action::Render {
        if let Some(path) = &config.output {
            std::fs::write(path, rendered.as_bytes())
                .map_err(|e| format!("cannot write report to `{path}`: {e}"))?;
        }
    }
    Ok(outcome.exit_code)
}
