//! Scenario batteries. A manifest holds one `name: subcommand flags...` per
//! line; blank lines and `#` comments are skipped. Scenarios run on the rayon
//! pool, each behind `catch_unwind`, and are reported in manifest order.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use orliczlab_core::report::Tally;
use orliczlab_core::VerificationReport;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{Cli, Command};
use crate::commands::{execute, overall, status_name, Outcome};
use crate::config::RunConfig;
use crate::error::CliError;

/// The default battery: one or more scenarios per module.
pub const DEFAULT_BATTERY: &str = "\
calderon-cubic-plane: check-condition --phi pow:p=3 --k 2 --expect convergent
calderon-quadratic-plane: check-condition --phi pow:p=2 --k 2 --expect divergent
calderon-cubic-space: check-condition --phi pow:p=3 --k 3 --expect divergent
calderon-quintic-space: check-condition --phi pow:p=5 --k 3 --expect convergent
calderon-powlog-plane: check-condition --phi powlog:p=2,s=2 --k 2 --expect convergent
forms-linear: check-condition --phi pow:p=1 --k 2 --p 1
forms-quadratic: check-condition --phi pow:p=2 --k 2 --p 2
forms-powlog: check-condition --phi powlog:p=1,s=2 --k 2 --p 1
forms-exponential: check-condition --phi exp:a=1 --k 2 --p 1
forms-exponential-half: check-condition --phi exp:a=1 --k 2 --p 0.5
forms-gaussian: check-condition --phi exp:a=2 --k 2 --p 1
log-integral-unit-weight: check-condition --phi pow:p=1 --k 2 --p 1 --weight const:c=1 --n 2
log-integral-log-weight: check-condition --phi expraw:a=1 --k 2 --p 1 --weight logpow:s=1 --n 2
extremal-quadratic-plane: build-extremal --phi pow:p=2 --k 2 --normalize rescale
counterexample-quadratic-plane: verify-counterexample --phi pow:p=2 --k 2 --depth 5
fmo-log-recip: oscillation --field log-recip --center 0,0 --scales 8
fmo-disc-sum: oscillation --field disc-sum:p=2 --center 0,0 --scales 8
fmo-bump-sum: oscillation --field bump-sum:delta=0.5 --center 0,0 --scales 8
modulus-joining-grid: modulus --ring 1,2.718281828459045,2 --family curves --grid 128
modulus-separating-grid: modulus --ring 1,2.718281828459045,2 --family spheres --grid 128
modulus-log-weight-spheres: modulus --ring 0.01,0.5,3 --weight logpow:s=1 --family spheres
modulus-power-weight-curves: modulus --ring 0.1,1,3 --weight pow:a=-0.5 --family curves
distortion-holder: distortion --map stretch:alpha=0.5,n=3 --check holder
distortion-sampled-kf: distortion --map stretch:alpha=2,n=3 --check kf --samples 32
reciprocity-identity-space: distortion --map identity:n=3 --check reciprocity
reciprocity-stretch-plane: distortion --map stretch:alpha=2,n=2 --check reciprocity --grid 64
";

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub args: Vec<String>,
}

pub fn parse_manifest(text: &str) -> Result<Vec<Scenario>, CliError> {
    let mut out: Vec<Scenario> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, rest) = line.split_once(':').ok_or_else(|| {
            CliError::Usage(format!(
                "manifest line {}: expected `name: command ...`",
                i + 1
            ))
        })?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!(
                "manifest line {}: bad scenario name `{name}`",
                i + 1
            )));
        }
        if out.iter().any(|s| s.name == name) {
            return Err(CliError::Usage(format!(
                "manifest line {}: scenario `{name}` repeated",
                i + 1
            )));
        }
        let args: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        if args.is_empty() {
            return Err(CliError::Usage(format!(
                "manifest line {}: no command",
                i + 1
            )));
        }
        out.push(Scenario {
            name: name.to_string(),
            args,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    pub name: String,
    pub args: String,
    pub status: &'static str,
    pub tally: Tally,
    pub checks: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

fn panic_text(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".to_string())
}

fn failed(name: &str, args: &str, error: Value, note: String) -> ScenarioResult {
    let check =
        VerificationReport::flag("scenario", "the scenario runs to completion", false, note);
    ScenarioResult {
        name: name.to_string(),
        args: args.to_string(),
        status: "FAIL",
        tally: Tally::of(std::slice::from_ref(&check)),
        checks: vec![check],
        error: Some(error),
    }
}

fn run_one(s: &Scenario, base: &RunConfig) -> ScenarioResult {
    let args = s.args.join(" ");
    let argv = std::iter::once("orliczlab".to_string()).chain(s.args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim_end().to_string());
            return failed(&s.name, &args, err.to_json(), err.to_string());
        }
    };
    let mut cfg = base.clone();
    for kv in &cli.set {
        let applied = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))
            .and_then(|(k, v)| cfg.set(k.trim(), v.trim()));
        if let Err(e) = applied {
            return failed(&s.name, &args, e.to_json(), e.to_string());
        }
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.config.is_some() || matches!(cli.command, Command::Suite { .. }) {
        let e = CliError::Usage("scenarios take neither --config nor a nested suite".into());
        return failed(&s.name, &args, e.to_json(), e.to_string());
    }
    match catch_unwind(AssertUnwindSafe(|| execute(&cli.command, &cfg))) {
        Ok(Ok(o)) => from_outcome(&s.name, &args, o),
        Ok(Err(e)) => failed(&s.name, &args, e.to_json(), e.to_string()),
        Err(p) => {
            let msg = panic_text(p.as_ref());
            failed(
                &s.name,
                &args,
                json!({ "error": { "kind": "panic", "message": msg } }),
                format!("panicked: {msg}"),
            )
        }
    }
}

fn from_outcome(name: &str, args: &str, o: Outcome) -> ScenarioResult {
    let checks: Vec<VerificationReport> = o
        .report
        .get("checks")
        .cloned()
        .and_then(|v| serde_json::from_value(v).ok())
        .unwrap_or_default();
    ScenarioResult {
        name: name.to_string(),
        args: args.to_string(),
        status: o.status_name(),
        tally: o.tally,
        checks,
        error: None,
    }
}

/// Run every scenario of the manifest (the built-in battery when `None`).
pub fn run_suite(manifest: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (source, text) = match manifest {
        Some(p) => (
            "file",
            std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?,
        ),
        None => ("built-in", DEFAULT_BATTERY.to_string()),
    };
    let scenarios = parse_manifest(&text)?;
    let timed: Vec<(ScenarioResult, f64)> = scenarios
        .par_iter()
        .map(|s| {
            let t = Instant::now();
            let r = run_one(s, cfg);
            (r, t.elapsed().as_secs_f64())
        })
        .collect();
    let mut tally = Tally::default();
    for (r, _) in &timed {
        for c in &r.checks {
            tally.add(c.status);
        }
    }
    let timing: Vec<Value> = timed
        .iter()
        .map(|(r, t)| json!({ "name": r.name, "runtime_seconds": t }))
        .collect();
    let results: Vec<&ScenarioResult> = timed.iter().map(|(r, _)| r).collect();
    let failed_scenarios: Vec<&str> = results
        .iter()
        .filter(|r| r.status == "FAIL")
        .map(|r| r.name.as_str())
        .collect();
    let report = json!({
        "command": "suite",
        "manifest": source,
        "seed": cfg.seed,
        "constants": cfg.constants,
        "scenario_count": results.len(),
        "check_count": tally.total(),
        "failed_scenarios": failed_scenarios,
        "status": status_name(overall(&tally)),
        "tally": tally,
        "scenarios": results,
    });
    Ok(Outcome {
        command: "suite",
        report,
        tally,
        artifacts: Vec::new(),
        plot: None,
        timing: json!({ "scenarios": timing }),
    })
}
