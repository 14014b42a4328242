use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cartankit"));
    c.env_remove("CARTANKIT_MAX_N");
    c
}

fn preset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cartankit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn report<'a>(v: &'a Value, id: &str) -> &'a Value {
    v["reports"].as_array().unwrap().iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("no report {id}"))
}

#[test]
fn homology_n4_is_torsion() {
    let out = run(&["homology", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(g1∧g2)⊗g-2"), "{text}");
}

#[test]
fn holonomy_of_single_preset() {
    let json = scratch("single.json");
    let out = bin().args(["holonomy", "--model"]).arg(preset("n4_single.json")).arg("--json").arg(&json).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&json);
    let h = &report(&v, "flatmodels.holonomy.n4.single_y34")["payload"]["report"];
    assert_eq!(h["dimension"], 1);
    assert_eq!(h["basis"], serde_json::json!(["Y_{3|4}"]));
}

#[test]
fn holonomy_of_saturated_presets() {
    for (file, id, dim) in [("n4_saturated.json", "flatmodels.holonomy.n4.general", 3), ("n5_saturated.json", "flatmodels.holonomy.n5.general", 7)] {
        let json = scratch(file);
        let out = bin().args(["holonomy", "--model"]).arg(preset(file)).arg("--json").arg(&json).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&json_of(&json), id)["payload"]["report"]["dimension"], dim);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["octonion", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["inclusions", "--case", "nonsense"]).status.code(), Some(2));
    let out = bin().env("CARTANKIT_MAX_N", "3").args(["homology", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_models_exit_3() {
    let cases = [
        ("garbage.json", "{ not json"),
        ("unknown.json", r#"{"n": 4, "modification": "twisted"}"#),
        ("noninjective.json", r#"{"n": 5, "modification": "general", "beta": [[3,4,1],[3,5,1]]}"#),
        ("range.json", r#"{"n": 4, "modification": "general", "gamma": [[9,1]]}"#),
        ("small.json", r#"{"n": 3, "modification": "single_y34"}"#),
    ];
    for (name, body) in cases {
        let p = scratch(name);
        std::fs::write(&p, body).unwrap();
        let out = bin().args(["holonomy", "--model"]).arg(&p).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&["holonomy", "--model", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn printed_table_mismatch_exits_1() {
    let json = scratch("table.json");
    let out = bin().args(["octonion", "table", "--json"]).arg(&json).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&json);
    assert_eq!(v["passed"], false);
    assert_eq!(report(&v, "octonion.table")["payload"]["mismatches_after_unit_sign_flip"], 0);
}

#[test]
fn output_is_deterministic() {
    let (a, b) = (scratch("det_a.json"), scratch("det_b.json"));
    for p in [&a, &b] {
        let out = bin().args(["tractor", "--seed", "7", "--trials", "50", "--json"]).arg(p).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    let v = json_of(&a);
    assert_eq!(report(&v, "tractorpt.signature.n3")["payload"]["signature"], serde_json::json!([4, 3]));
}

#[test]
fn subcommands_pass() {
    for args in [vec!["conformal3"], vec!["octonion", "derivations"], vec!["inclusions", "--case", "cr"], vec!["inclusions"]] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn verify_all_fails_only_on_the_printed_table() {
    let json = scratch("all.json");
    let out = bin().args(["verify-all", "--json"]).arg(&json).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&json);
    assert_eq!(v["failed"], serde_json::json!(["octonion.table"]));
    let ids: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted, "report ids are sorted and unique");
}
