use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const VEE: &str = "elems p a b; covers a<p b<p\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qposet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("vee.poset"), VEE).unwrap();
    std::fs::write(dir.path().join("one.poset"), "elems x\n").unwrap();
    std::fs::write(
        dir.path().join("e2.quiver"),
        "vertices v0 v1 v2; arrows a1: v1->v1 b1: v1->v0 a2: v2->v2 b2: v2->v1\n",
    )
    .unwrap();
    dir
}

#[test]
fn info_on_a_singleton() {
    let dir = setup();
    let out = run(dir.path(), &["info", "one.poset"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    let primes = r["result"]["monoid"]["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 1);
    assert_eq!(primes[0]["free"], true);
    assert_eq!(r["result"]["forest"], true);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn pipeline_on_two_covers() {
    let dir = setup();
    let out = run(dir.path(), &["pipeline", "vee.poset", "--bound", "3"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["result"]["verdict"], "iso");
    assert_eq!(r["result"]["witness"].as_array().unwrap().len(), 3);
    assert_eq!(r["params"]["bound"], 3);
}

#[test]
fn verify_algebra_is_deterministic() {
    let dir = setup();
    let args = ["verify-algebra", "vee.poset", "--depth", "6", "--seed", "3"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["ok"], true);
    assert_eq!(r["result"]["relations"]["ok"], true);
    assert_eq!(r["result"]["two_element_chain"]["right_inverse"], false);
}

#[test]
fn flags_override_config() {
    let dir = setup();
    std::fs::write(dir.path().join("c.toml"), "bound = 2\nseed = 9\n").unwrap();
    let r = json(&run(dir.path(), &["monoid", "vee.poset", "--config", "c.toml"]));
    assert_eq!(r["params"]["bound"], 2);
    let r = json(&run(dir.path(), &["monoid", "vee.poset", "--config", "c.toml", "--bound", "3"]));
    assert_eq!(r["params"]["bound"], 3);
    std::fs::write(dir.path().join("bad.toml"), "colour = 1\n").unwrap();
    let out = run(dir.path(), &["monoid", "vee.poset", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_monoid_report() {
    let dir = setup();
    let out = run(dir.path(), &["graphmon", "e2.quiver", "--bound", "3"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["result"]["hereditary_saturated"].as_array().unwrap().len(), 4);
    assert_eq!(r["result"]["chain_check"]["r"], 2);
    assert_eq!(r["result"]["chain_check"]["matches_chain"], true);
}

#[test]
fn export_writes_dot_files() {
    let dir = setup();
    for what in ["hasse", "quiver", "stages"] {
        let out = run(dir.path(), &["export", "vee.poset", "--what", what, "--out", "dots"]);
        assert!(out.status.success(), "{what}");
    }
    for f in ["hasse.dot", "quiver.dot", "stages_p.dot"] {
        let body = std::fs::read_to_string(dir.path().join("dots").join(f)).unwrap();
        assert!(body.starts_with("digraph"), "{f}");
    }
}

#[test]
fn report_written_to_out_dir() {
    let dir = setup();
    let out = run(dir.path(), &["info", "vee.poset", "--out", "reports"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("reports/info.json")).unwrap();
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["command"], "info");
}

#[test]
fn bad_inputs_exit_with_2() {
    let dir = setup();
    std::fs::write(dir.path().join("bad.poset"), "elems a; covers a<b\n").unwrap();
    assert_eq!(run(dir.path(), &["info", "bad.poset"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["info", "missing.poset"]).status.code(), Some(2));
    let out = run(dir.path(), &["info", "vee.poset", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn prime_pair_json_input() {
    let dir = setup();
    std::fs::write(
        dir.path().join("mixed.json"),
        r#"{"primes":["q","p"],"rel":[["q","q"],["p","q"]]}"#,
    )
    .unwrap();
    let r = json(&run(dir.path(), &["monoid", "mixed.json"]));
    assert_eq!(r["ok"], true);
    assert_eq!(r["result"]["strongly_separative"], false);
}
