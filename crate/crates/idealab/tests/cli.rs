use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use idealab::workspace::Workspace;
use serde_json::{json, Value};

const FIXTURES: [&str; 5] = ["z4", "projz4", "z9", "f2x2", "a2path"];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_idealab"));
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("IDEALAB_")) {
        cmd.env_remove(k);
    }
    cmd.args(args).envs(env.iter().copied()).output().expect("binary runs")
}

fn run(ws: &str, args: &[&str]) -> (i32, Value) {
    let path = fixture(ws);
    let mut full = vec!["--workspace", path.to_str().unwrap()];
    full.extend_from_slice(args);
    let out = run_with(&full, &[]);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn check<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap_or_else(|| panic!("no check {id}"))
}

#[test]
fn bundled_fixtures_parse_and_round_trip() {
    let none = |_: &str| None;
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let ws = Workspace::parse(&text, None, &none).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = Workspace::parse(&ws.emit(), None, &none).unwrap();
        assert_eq!(ws.file, again.file, "{name}");
        assert_eq!(ws.emit(), again.emit(), "{name}");
    }
}

#[test]
fn dangling_module_reference_is_an_input_error() {
    let text = std::fs::read_to_string(fixture("z4")).unwrap().replace("\"from\": \"R\"", "\"from\": \"Q\"");
    assert!(text.contains("\"Q\""));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dangling.json");
    std::fs::write(&path, text).unwrap();
    let out = run_with(&["--workspace", path.to_str().unwrap(), "ideal", "objects", "-i", "gen2"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown module \"Q\""), "{err}");
}

#[test]
fn unknown_command_is_an_input_error() {
    let path = fixture("z4");
    let out = run_with(&["--workspace", path.to_str().unwrap(), "frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn left_annihilator_of_gen2_on_projectives() {
    let (code, r) = run("z4", &["--universe", "R", "ideal", "ann", "--side", "left", "-i", "gen2"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ann")["witness"]["equal_to"], json!(["gen2"]));
    let (code, r) = run("projz4", &["ideal", "ann", "--side", "left", "-i", "gen2"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ann")["witness"]["equal_to"], json!(["gen2"]));
}

#[test]
fn left_annihilator_of_gen2_with_the_simple_is_the_socle() {
    let (code, r) = run("z4", &["ideal", "ann", "--side", "left", "-i", "gen2"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ann")["witness"]["equal_to"], json!(["socle"]));
}

#[test]
fn socle_trace_of_the_regular_module_is_2r() {
    let (code, r) = run("z4", &["torsion", "generate", "-i", "socle"]);
    assert_eq!(code, 0);
    let w = &check(&r, "trace:R")["witness"];
    assert_eq!(w["trace"], json!([[2]]));
    assert_eq!(w["torsion_order"], json!(2));
}

#[test]
fn verify_all_on_z4_passes() {
    let (code, r) = run("z4", &["verify", "all"]);
    assert_eq!(code, 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
    assert_eq!(r["exit"], json!(0));
}

#[test]
fn corrupted_salce_sequence_fails_and_replays() {
    let (code, r) = run("z4", &["torsion", "salce", "-i", "socle", "--corrupt", "R"]);
    assert_eq!(code, 1);
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["verdict"] == "fail").collect();
    assert!(!failed.is_empty());
    for rec in failed {
        let w = &rec["witness"];
        let replay = json!({"inflation": w["inflation"], "deflation": w["deflation"]});
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("replay.json");
        std::fs::write(&path, replay.to_string()).unwrap();
        let (code, again) = run("z4", &["torsion", "salce", "-i", "socle", "--replay", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(again["checks"].as_array().unwrap().iter().any(|c| c["verdict"] == "fail"));
    }
}

#[test]
fn cover_over_budget_is_undecided_only() {
    let path = fixture("z4");
    let args = ["--workspace", path.to_str().unwrap(), "torsion", "cover", "-i", "socle", "--object", "R"];
    let out = run_with(&args, &[("IDEALAB_BUDGET_COVER", "0")]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["budgets"]["cover"], json!(0));
    let out = run_with(&args, &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn text_format_ends_with_summary() {
    let path = fixture("z4");
    let out =
        run_with(&["--workspace", path.to_str().unwrap(), "--format", "text", "ideal", "objects", "-i", "socle"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with(&format!("exit {}", out.status.code().unwrap())), "{text}");
}

#[test]
fn out_file_matches_stdout_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let path = fixture("f2x2");
    let base = ["--workspace", path.to_str().unwrap(), "stable", "selfinj"];
    let printed = run_with(&base, &[]).stdout;
    let mut with_out = base.to_vec();
    with_out.extend(["--out", target.to_str().unwrap()]);
    let out = run_with(&with_out, &[]);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), printed);
}

#[test]
fn stable_orth_failures_replay() {
    for ws in ["z4", "f2x2"] {
        let (code, r) = run(ws, &["stable", "orth", "-i", "socle", "-j", "socle"]);
        assert_eq!(code, 1);
        for rec in r["checks"].as_array().unwrap().iter().filter(|c| c["verdict"] == "fail") {
            let w = &rec["witness"];
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("pair.json");
            std::fs::write(&path, json!({"first": w["first"], "second": w["second"]}).to_string()).unwrap();
            let (code, _) = run(ws, &["stable", "orth", "--replay", path.to_str().unwrap()]);
            assert_eq!(code, 1, "{rec}");
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = fixture("z4");
    let args = ["--workspace", path.to_str().unwrap(), "verify", "all"];
    assert_eq!(run_with(&args, &[]).stdout, run_with(&args, &[]).stdout);
}
