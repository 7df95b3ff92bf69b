use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn ovoid(args: &[&str]) -> (i32, String) {
    let mut full = vec!["ovoid"];
    full.extend_from_slice(args);
    ovoid_cli::run(full)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out) = ovoid(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"));
    (code, v)
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/certificate.schema.json"),
    )
    .unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

#[test]
fn tits_needs_odd_m() {
    assert_eq!(ovoid(&["ovoid", "--source", "tits", "--m", "2"]).0, 2);
    assert_eq!(ovoid(&["ovoid", "--source", "tits", "--m", "3"]).0, 0);
}

#[test]
fn bad_parameters_exit_2() {
    assert_eq!(ovoid(&["gaussian-periods", "--m", "2", "--N", "7"]).0, 2);
    assert_eq!(ovoid(&["construct-code", "--m", "0"]).0, 2);
    assert_eq!(ovoid(&["frobnicate"]).0, 2);
    assert_eq!(
        ovoid(&["verify-ovoid", "--in", "/nonexistent/points.txt"]).0,
        2
    );
    assert_eq!(ovoid(&["designs", "--m", "2", "--which", "nothing"]).0, 2);
}

#[test]
fn certificates_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("e.txt");
    let p = pts.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["construct-code", "--m", "2"],
        vec!["weights", "--m", "2"],
        vec!["weights", "--m", "2", "--N", "5"],
        vec!["dual-weights", "--m", "2"],
        vec!["gaussian-periods", "--m", "2", "--N", "5"],
        vec!["ovoid", "--source", "elliptic", "--m", "2", "--out", p],
        vec!["verify-ovoid", "--in", p],
        vec!["designs", "--m", "2", "--which", "minweight"],
        vec!["equivalence", "--a", p, "--b", p],
        vec!["certify-all", "--m", "2"],
    ];
    for args in runs {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["pass"], Value::Bool(true));
        assert_valid(&v);
    }
}

#[test]
fn construct_code_text() {
    let (code, out) = ovoid(&["construct-code", "--m", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("4 17 4"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn weights_of_external_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.txt");
    let (_, text) = ovoid(&["construct-code", "--m", "2"]);
    std::fs::write(&file, text).unwrap();
    let (code, v) = json(&["weights", "--in", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["distribution"]["12"], 204);
    assert_eq!(v["results"]["distribution"]["16"], 51);
}

#[test]
fn planted_collinear_triple_fails() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(
        &file,
        "PG3 q=4\n0 0 1 0\n1 0 0 0\n0 1 0 0\n1 1 0 0\n0 0 0 1\n",
    )
    .unwrap();
    let (code, v) = json(&["verify-ovoid", "--in", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_valid(&v);
    assert_eq!(
        v["results"]["certificate"]["witness"]["indices"],
        serde_json::json!([1, 2, 3])
    );
    let (code, text) = ovoid(&["verify-ovoid", "--in", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(text.contains("collinear points [1, 2, 3]"), "{text}");
}

#[test]
fn equivalence_modes() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.txt");
    let t = dir.path().join("t.txt");
    let c = dir.path().join("c.txt");
    for (src, f) in [("elliptic", &e), ("tits", &t), ("from-code", &c)] {
        assert_eq!(
            ovoid(&[
                "ovoid",
                "--source",
                src,
                "--m",
                "3",
                "--out",
                f.to_str().unwrap()
            ])
            .0,
            0
        );
    }
    let (e, t, c) = (
        e.to_str().unwrap(),
        t.to_str().unwrap(),
        c.to_str().unwrap(),
    );

    let (code, v) = json(&["equivalence", "--a", e, "--b", t, "--fingerprint-only"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["report"]["verdict"], "inequivalent");

    let (code, v) = json(&["equivalence", "--a", c, "--b", e, "--exact"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    let report = &v["results"]["report"];
    if report["verdict"] == "equivalent" {
        assert_eq!(report["witness"]["matrix"].as_array().unwrap().len(), 4);
        assert!(report["witness"]["frobenius"].is_u64());
        assert_eq!(v["verdicts"]["witness_verified"], true);
    }

    let (_, v) = json(&["equivalence", "--a", e, "--b", t, "--budget", "5"]);
    assert_eq!(v["results"]["report"]["verdict"], "inconclusive");
}

#[test]
fn table_threshold_from_environment() {
    let run = |limit: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ovoid"));
        cmd.args(["--json", "certify-all", "--m", "2"]);
        match limit {
            Some(l) => cmd.env("OVOID_TABLE_MAX_DEGREE", l),
            None => cmd.env_remove("OVOID_TABLE_MAX_DEGREE"),
        };
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    assert_eq!(run(None), run(Some("0")));
    let out = Command::new(env!("CARGO_BIN_EXE_ovoid"))
        .args(["weights", "--m", "2"])
        .env("OVOID_TABLE_MAX_DEGREE", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_ovoid"))
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(status(&["ovoid", "--source", "tits", "--m", "2"]), Some(2));
    assert_eq!(status(&["certify-all", "--m", "2"]), Some(0));
    assert_eq!(status(&["--help"]), Some(0));
}
