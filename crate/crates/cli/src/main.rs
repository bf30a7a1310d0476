mod args;
mod commands;
mod config;
mod corpus;
mod input;

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::io::Write;
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use zk_core::cover::Check;

use args::{Cli, Format};
use config::Config;
use input::Ctx;

pub const SCHEMA: &str = "1";

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value or input document; names the flag.
    Usage(String),
    Compute(zk_core::Error),
}

impl CliError {
    pub fn usage(flag: &str, e: impl Display) -> CliError {
        CliError::Usage(format!("{flag}: {e}"))
    }
}

impl From<zk_core::Error> for CliError {
    fn from(e: zk_core::Error) -> CliError {
        CliError::Compute(e)
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub result: Value,
    pub checks: Vec<Check>,
    /// `Some` for yes/no commands.
    pub decision: Option<bool>,
}

impl Outcome {
    pub fn value(result: Value) -> Outcome {
        Outcome { result, checks: Vec::new(), decision: None }
    }

    pub fn decision(result: Value, answer: bool) -> Outcome {
        Outcome { result, checks: Vec::new(), decision: Some(answer) }
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> Outcome {
        self.checks = checks;
        self
    }
}

pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn command_name(matches: &clap::ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = matches;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name.to_string());
        cur = sub;
    }
    parts.join(" ")
}

fn digest(argv: &[String], config: &Config, files: &BTreeMap<String, String>) -> String {
    let canonical = json!({ "argv": argv, "config": config.digest_view(), "files": files });
    let mut h = Sha256::new();
    h.update(canonical.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Object(m) if m.contains_key("display") => m["display"].as_str().map(str::to_string).unwrap_or_default(),
        Value::Array(items) if items.iter().any(|x| x.get("display").is_some()) => {
            format!("[{}]", items.iter().map(render_value).collect::<Vec<_>>().join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_text(command: &str, report: &Map<String, Value>) -> String {
    let mut out = format!("zk {command}\n");
    if let Some(Value::Object(result)) = report.get("result") {
        if let Some(Value::Array(rows)) = result.get("table") {
            out.push_str(&format!("n = {}\n{:>4}  {:<20} {:<20} match\n", result["n"], "d", "dims", "oracle"));
            for row in rows {
                out.push_str(&format!(
                    "{:>4}  {:<20} {:<20} {}\n",
                    row["d"].to_string(),
                    row["dims"].to_string(),
                    row["oracle"].to_string(),
                    row["match"]
                ));
            }
        } else {
            for (k, v) in result {
                if k != "display" {
                    out.push_str(&format!("{k}: {}\n", render_value(v)));
                }
            }
        }
    }
    if let Some(Value::String(e)) = report.get("error") {
        out.push_str(&format!("error: {e}\n"));
    }
    if let Some(Value::Array(checks)) = report.get("verification") {
        for c in checks {
            let mark = if c["passed"] == Value::Bool(true) { "ok" } else { "FAILED" };
            out.push_str(&format!("check {}: {mark}\n", c["check"].as_str().unwrap_or("")));
        }
    }
    out
}

/// Parses `argv` (without the program name), runs the command and renders
/// the report.
pub fn run(argv: &[String]) -> RunOutput {
    let matches = match Cli::command().try_get_matches_from(std::iter::once("zk".to_string()).chain(argv.iter().cloned())) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) { 0 } else { 2 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return RunOutput { code: 2, stdout: String::new(), stderr: e.render().to_string() },
    };
    let command = command_name(&matches);

    let mut files = BTreeMap::new();
    let resolved = Config::resolve(&cli.global, |p| {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::usage("--config", format!("{}: {e}", p.display())))?;
        files.insert(p.display().to_string(), text.clone());
        Ok(text)
    });
    let config = match resolved {
        Ok(c) => c,
        Err(e) => return RunOutput { code: 2, stdout: String::new(), stderr: format!("{e}\n") },
    };
    let mut ctx = Ctx::new(config.clone(), cli.global.vars.as_deref(), files);

    let start = Instant::now();
    let outcome = match config.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command, &mut ctx)),
            Err(e) => Err(CliError::usage("--jobs", e)),
        },
        None => commands::dispatch(&cli.command, &mut ctx),
    };
    let elapsed = start.elapsed();

    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("command".into(), json!(command));
    report.insert("argv".into(), json!(argv));
    report.insert("inputs_digest".into(), json!(digest(argv, &config, ctx.files())));
    let (code, stderr) = match outcome {
        Ok(out) => {
            let failed = out.checks.iter().any(|c| !c.passed);
            report.insert("result".into(), out.result);
            report.insert(
                "verification".into(),
                Value::Array(out.checks.iter().map(|c| json!({"check": c.name, "passed": c.passed})).collect()),
            );
            match (out.decision, failed) {
                (_, true) => (3, "self-check failed\n".to_string()),
                (Some(false), _) => (1, String::new()),
                _ => (0, String::new()),
            }
        }
        Err(CliError::Usage(m)) => {
            return RunOutput { code: 2, stdout: String::new(), stderr: format!("usage error: {m}\n") };
        }
        Err(CliError::Compute(e)) => {
            report.insert("result".into(), Value::Null);
            report.insert("verification".into(), json!([]));
            report.insert("error".into(), json!(e.to_string()));
            let stderr = if config.format == Format::Json { format!("error: {e}\n") } else { String::new() };
            (3, stderr)
        }
    };
    if cli.global.timing {
        report.insert("timing_ms".into(), json!(elapsed.as_secs_f64() * 1000.0));
    }
    let stdout = match config.format {
        Format::Json => serde_json::to_string_pretty(&Value::Object(report.clone())).expect("serializable") + "\n",
        Format::Text => render_text(&command, &report),
    };
    RunOutput { code, stdout, stderr }
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let out = run(&argv);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
