use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gwfs_core::io::{serialize_functor, serialize_groupoid, serialize_problem};
use gwfs_core::standard::{discrete, interval, terminal, z2};
use gwfs_core::{Functor, LiftingProblem, NormalClovenFibration};
use serde_json::Value;

fn gwfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwfs")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn inclusion() -> Functor {
    Functor::from_names(
        discrete(2),
        interval(),
        &[("0".into(), "0".into()), ("1".into(), "1".into())],
        &[("1_0".into(), "1_0".into()), ("1_1".into(), "1_1".into())],
    )
    .unwrap()
}

#[test]
fn factorize_endpoint_inclusion() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", &serialize_functor(&inclusion()));
    let out = dir.path().join("fact.json");
    let run = gwfs(&["factorize", "--in", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let doc = read_json(&out);
    assert_eq!(doc["kind"], "factorization");
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["mid"]["objects"].as_array().unwrap().len(), 4);
}

#[test]
fn export_dot_of_z2() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "z2.json", &serialize_groupoid(&z2()));
    let run = gwfs(&["export-dot", "--in", g.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let dot = String::from_utf8(run.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 2);
    assert!(dot.contains("[label=\"s\"]"));
}

#[test]
fn validate_reports_bad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "z2.json", &serialize_groupoid(&z2()));
    let run = gwfs(&["validate", "--in", good.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));

    let bad = write(dir.path(), "bad.json", r#"{"kind": "groupoid", "objects": []}"#);
    let out = dir.path().join("diag.json");
    let run = gwfs(&["validate", "--in", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    let doc = read_json(&out);
    assert_eq!(doc["kind"], "diagnostic");
    assert!(doc["error"].as_str().unwrap().contains("arrows"));
}

#[test]
fn missing_input_is_a_usage_error_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("diag.json");
    let missing = dir.path().join("nope.json");
    let run = gwfs(&["path", "--in", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert_eq!(read_json(&out)["kind"], "diagnostic");

    let run = gwfs(&["frobnicate", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert_eq!(read_json(&out)["command"], "usage");
}

#[test]
fn lift_without_witness_needs_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let (two, pt) = (discrete(2), terminal());
    let prob = LiftingProblem::new(
        inclusion(),
        NormalClovenFibration::terminal(&two, &pt),
        Functor::identity(&two),
        Functor::to_point(&interval(), &pt),
    )
    .unwrap();
    let p = write(dir.path(), "prob.json", &serialize_problem(&prob));
    let run = gwfs(&["lift", "--in", p.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));

    let out = dir.path().join("fillers.json");
    let run = gwfs(&["lift", "--oracle", "--in", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    let doc = read_json(&out);
    assert_eq!(doc["kind"], "fillers");
    assert_eq!(doc["fillers"].as_array().unwrap().len(), 0);
}

#[test]
fn lift_with_factorization_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = serialize_functor(&inclusion());
    let fact = gwfs_core::factorize(&inclusion()).unwrap();
    let lambda = fact.lambda().clone();
    let prob = LiftingProblem::new(lambda.clone(), fact.rho().clone(), lambda, fact.rho().functor().clone()).unwrap();
    let mut doc: Value = serde_json::from_str(&serialize_problem(&prob)).unwrap();
    let of: Value = serde_json::from_str(&f).unwrap();
    let mut of = of.as_object().unwrap().clone();
    of.remove("kind");
    doc["witness"] = serde_json::json!({ "factorization-unit": { "of": of } });
    let p = write(dir.path(), "prob.json", &doc.to_string());
    let out = dir.path().join("filler.json");
    let run = gwfs(&["lift", "--in", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let doc = read_json(&out);
    assert_eq!(doc["method"], "constructive");
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["fillers"].as_array().unwrap().len(), 1);
}

#[test]
fn pullback_and_path_commands() {
    let dir = tempfile::tempdir().unwrap();
    let i = interval();
    let pt = terminal();
    let f = write(dir.path(), "f.json", &serialize_functor(&inclusion()));
    let p = write(
        dir.path(),
        "p.json",
        &gwfs_core::io::serialize_fibration(&NormalClovenFibration::identity(&i)),
    );
    let out = dir.path().join("pb.json");
    let run = gwfs(&["pullback", "--in", f.to_str().unwrap(), "--in", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(read_json(&out)["apex"]["objects"].as_array().unwrap().len(), 2);

    let q = write(
        dir.path(),
        "q.json",
        &gwfs_core::io::serialize_fibration(&NormalClovenFibration::terminal(&i, &pt)),
    );
    let out = dir.path().join("path.json");
    let run = gwfs(&["path", "--in", q.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let doc = read_json(&out);
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["groupoid"]["objects"].as_array().unwrap().len(), 4);
    assert_eq!(doc["groupoid"]["arrows"].as_array().unwrap().len(), 16);
}

#[test]
fn auto_cleavage_is_resolved() {
    let dir = tempfile::tempdir().unwrap();
    let g = z2();
    let text = gwfs_core::io::serialize_fibration(&NormalClovenFibration::identity(&g));
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["cleavage"] = Value::from("auto");
    let p = write(dir.path(), "p.json", &doc.to_string());
    let run = gwfs(&["validate", "--in", p.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
}

#[test]
fn verify_wfs_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let run = gwfs(&["verify-wfs", "--seed", "7", "--max-objects", "2", "--max-arrows", "4", "--out", out.to_str().unwrap()]);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let doc = read_json(&a);
    assert_eq!(doc["kind"], "report");
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["passed"], true);
}

#[test]
fn verify_wfs_rejects_absurd_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = gwfs(&["verify-wfs", "--max-objects", "50", "--max-arrows", "500", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    assert!(read_json(&out)["error"].as_str().unwrap().contains("budget"));
}
