//! Regression corpus: each `*.json` case holds an argv, the expected
//! `result` and the expected exit code.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::{CliError, Outcome};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Case {
    argv: Vec<String>,
    expected: Value,
    exit: i32,
}

fn run_case(path: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("unreadable: {e}"))?;
    let case: Case = serde_json::from_str(&text).map_err(|e| format!("malformed case: {e}"))?;
    let dir = path.parent().unwrap_or(Path::new(".")).display().to_string();
    let mut argv: Vec<String> = case.argv.iter().map(|a| a.replace("$CORPUS", &dir)).collect();
    if argv.first().map(String::as_str) == Some("corpus") {
        return Err("nested corpus runs are not allowed".into());
    }
    if !argv.iter().any(|a| a == "--format" || a.starts_with("--format=")) {
        argv.splice(0..0, ["--format".to_string(), "json".to_string()]);
    }
    let out = crate::run(&argv);
    if out.code != case.exit {
        return Err(format!("exit code {} (expected {}): {}", out.code, case.exit, out.stderr.trim()));
    }
    if out.stdout.is_empty() {
        return if case.expected.is_null() { Ok(()) } else { Err("no report produced".into()) };
    }
    let report: Value = serde_json::from_str(&out.stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    if report["result"] != case.expected {
        return Err(format!("result differs: got {}", report["result"]));
    }
    Ok(())
}

pub fn run_dir(dir: &Path) -> Result<Outcome, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::usage("DIR", format!("{}: {e}", dir.display())))?;
    let mut cases: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    cases.sort();
    let mut failures = Vec::new();
    for path in &cases {
        if let Err(reason) = run_case(path) {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            failures.push(json!({ "case": name, "reason": reason }));
        }
    }
    let passed = cases.len() - failures.len();
    let all = failures.is_empty();
    Ok(Outcome::decision(json!({ "total": cases.len(), "passed": passed, "failures": failures }), all))
}
