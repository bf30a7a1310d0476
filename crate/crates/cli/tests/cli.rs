use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use zk_core::wire::{AlgebraDoc, PolyDoc};
use zk_core::{Field, Ring};

fn zk() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zk"));
    for var in ["ZK_FIELD", "ZK_ORDER", "ZK_CAP", "ZK_SAT_BOUND", "ZK_MARGIN", "ZK_JOBS", "ZK_FORMAT"] {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    zk().args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad report: {e}\n{}", String::from_utf8_lossy(&out.stdout)))
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["unimodular", "--fs", "[X, 1-X]"]).status.code(), Some(0));
    assert_eq!(run(&["unimodular", "--fs", "[X, X^2]"]).status.code(), Some(1));
    assert_eq!(run(&["kdim", "--ideal", "[x]", "--field", "Fp:6"]).status.code(), Some(2));
    assert_eq!(run(&["classify-unit", "--g", "X + 1"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn usage_errors_name_the_flag() {
    let out = run(&["member", "--ideal", "[X^]", "--f", "X"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--ideal"));
}

#[test]
fn computation_errors_carry_the_module_error() {
    let out = run(&["classify-unit", "--g", "X + 1"]);
    let r = report(&out);
    assert_eq!(r["result"], Value::Null);
    assert!(r["error"].as_str().unwrap().contains("not a unit"));
}

#[test]
fn report_shape() {
    let r = report(&run(&["pn-cohomology", "--n", "1", "--d", "0"]));
    assert_eq!(r["schema"], "1");
    assert_eq!(r["command"], "pn-cohomology");
    assert_eq!(r["result"]["dims"], serde_json::json!([1, 0]));
    assert_eq!(r["result"]["match"], true);
    assert!(!r["verification"].as_array().unwrap().is_empty());
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(r.get("timing_ms").is_none());
    let timed = report(&run(&["pn-cohomology", "--n", "1", "--d", "0", "--timing"]));
    assert!(timed["timing_ms"].is_number());
}

#[test]
fn text_table() {
    let out = run(&["pn-cohomology", "--n", "2", "--table", "-3..0", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.trim_start().starts_with("-3") && l.contains("[0,0,1]")));
}

#[test]
fn deterministic_across_runs_and_jobs() {
    let cases: [&[&str]; 3] = [
        &["pn-cohomology", "--n", "2", "--table", "-5..5"],
        &["sqc-roundtrip", "--relations", "[x*y]", "--field", "Fp:2"],
        &["gb", "--ideal", "[X^2*Y - Z, Y^2 - X*Z, X*Y*Z - 1]"],
    ];
    for args in cases {
        let base = run(args).stdout;
        assert_eq!(run(args).stdout, base);
        for jobs in ["1", "4"] {
            let out = zk().args(args).env("ZK_JOBS", jobs).output().unwrap();
            assert_eq!(out.stdout, base, "jobs {jobs} changed {args:?}");
        }
    }
}

#[test]
fn emitted_polynomials_round_trip() {
    let r = report(&run(&["gb", "--ideal", "[X^2 - Y, X*Y - 1]"]));
    let ring = Ring::new(Field::Rationals, ["X", "Y"]);
    for g in r["result"]["basis"].as_array().unwrap() {
        let doc: PolyDoc = serde_json::from_value(g.clone()).unwrap();
        let f = doc.decode(&ring).unwrap();
        assert_eq!(f.to_string(), g["display"].as_str().unwrap());
        assert_eq!(serde_json::to_value(PolyDoc::encode(&f)).unwrap()["terms"], g["terms"]);
        let member = run(&["member", "--vars", "X,Y", "--ideal", "[X^2 - Y, X*Y - 1]", "--f", &g.to_string()]);
        assert_eq!(member.status.code(), Some(0));
    }
}

#[test]
fn algebra_documents_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let out = run(&["algebra", "new", "--relations", "[x^2 - 2*y, y^3]", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let emitted = report(&out)["result"]["algebra"].clone();
    let doc: AlgebraDoc = serde_json::from_value(emitted.clone()).unwrap();
    let back = serde_json::to_value(AlgebraDoc::encode(&doc.decode(Field::Rationals).unwrap())).unwrap();
    assert_eq!(back, emitted);
    let shown = report(&run(&["algebra", "show", "--algebra", path.to_str().unwrap()]));
    assert_eq!(shown["result"]["algebra"], emitted);
    assert_eq!(shown["result"]["k_dimension"], 6);
}

#[test]
fn flags_beat_env_beat_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"field": "Fp:5"}"#).unwrap();
    let alg = r#"{"n": 1, "relations": [{"terms": [{"coeff": "1", "exps": [2]}, {"coeff": "-1", "exps": [0]}]}]}"#;
    let field_of = |c: &mut Command| -> Value {
        let out = c.output().unwrap();
        report(&out)["result"]["field"].clone()
    };
    let base = ["spec-points", "--algebra", alg, "--config", cfg.to_str().unwrap()];
    assert_eq!(field_of(zk().args(base)), "Fp:5");
    assert_eq!(field_of(zk().args(base).env("ZK_FIELD", "Fp:3")), "Fp:3");
    assert_eq!(field_of(zk().args(base).env("ZK_FIELD", "Fp:3").args(["--field", "Fp:7"])), "Fp:7");
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"feild": "Fp:5"}"#).unwrap();
    let out = run(&["kdim", "--ideal", "[x]", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--config"));
}

#[test]
fn digest_tracks_inputs() {
    let a = report(&run(&["kdim", "--ideal", "[x^2]"]));
    let b = report(&run(&["kdim", "--ideal", "[x^3]"]));
    let c = report(&run(&["kdim", "--ideal", "[x^2]", "--format", "json"]));
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
    assert_eq!(a["inputs_digest"], report(&run(&["kdim", "--ideal", "[x^2]"]))["inputs_digest"]);
}

#[test]
fn shipped_corpus_passes() {
    let out = run(&["corpus", corpus_dir().to_str().unwrap()]);
    let r = report(&out);
    assert_eq!(r["result"]["failures"], serde_json::json!([]), "{}", r["result"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(r["result"]["total"].as_u64().unwrap() >= 40);
}

fn copy_corpus(to: &Path) {
    std::fs::create_dir_all(to.join("data")).unwrap();
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let p = entry.unwrap().path();
        if p.is_file() {
            std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
        }
    }
    for entry in std::fs::read_dir(corpus_dir().join("data")).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, to.join("data").join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn perturbed_case_is_the_only_failure() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let case = dir.path().join("kdim_squares.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&case).unwrap()).unwrap();
    v["expected"]["k_dimension"] = 3.into();
    std::fs::write(&case, v.to_string()).unwrap();

    let out = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let failures = r["result"]["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0]["case"], "kdim_squares.json");
}

#[test]
fn malformed_case_does_not_stop_the_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a_bad.json"), "{ not json").unwrap();
    std::fs::write(
        dir.path().join("b_good.json"),
        r#"{"argv": ["kdim", "--ideal", "[x^2]"], "expected": {"k_dimension": 2}, "exit": 0}"#,
    )
    .unwrap();
    let r = report(&run(&["corpus", dir.path().to_str().unwrap()]));
    assert_eq!(r["result"]["total"], 2);
    assert_eq!(r["result"]["passed"], 1);
    assert_eq!(r["result"]["failures"][0]["case"], "a_bad.json");
}

#[test]
fn empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["total"], 0);
    assert_eq!(r["result"]["passed"], 0);
}

#[test]
fn split_cocycle_transcript() {
    let path = corpus_dir().join("data/cocycle_worked.json");
    let r = report(&run(&["split-cocycle", "--cocycle", path.to_str().unwrap()]));
    let checks = r["verification"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(r["result"]["u"][0]["display"], "-1 / (X)");
}
