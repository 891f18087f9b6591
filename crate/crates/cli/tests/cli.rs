use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellsurf"))
        .args(args)
        .env("ELLSURF_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classify_table_and_json() {
    let o = run(&["classify", "--model", &data("x33.json"), "--table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("place"), "{text}");
    assert!(text.contains("III*") && text.contains("\n0 "), "{text}");

    let v = json(&run(&["classify", "--model", &data("x33.json"), "--json"]));
    let kinds: Vec<&str> = v["surface"]["fibers"].as_array().unwrap().iter().map(|f| f["type"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["III", "III*"]);
    assert_eq!(v["surface"]["euler"], 12);
}

#[test]
fn modular_table() {
    let v = json(&run(&["modular", "--table", "11..25", "--json"]));
    let g1: Vec<i64> = v["table"].as_array().unwrap().iter().map(|r| r["g1"].as_i64().unwrap()).collect();
    assert_eq!(g1, [1, 0, 2, 1, 1, 2, 5, 2, 7, 3, 5, 6, 12, 5, 12]);
    let text = stdout(&run(&["modular", "--table"]));
    assert_eq!(text.lines().count(), 16);
    let v = json(&run(&["modular", "--bound", "0", "--json"]));
    assert_eq!(v["bound"]["sharp"], 25);
}

#[test]
fn torsion_and_catalog() {
    let v = json(&run(&["torsion", "--model", "catalog:SEC10", "--json"]));
    assert_eq!(v["group"], "Z/3");
    let v = json(&run(&["catalog", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 8);
    let v = json(&run(&["catalog", "X3333", "--json"]));
    assert_eq!(v["jacobian"]["torsion"]["factors"], serde_json::json!([3, 3]));
}

#[test]
fn lattice_overlattices() {
    let v = json(&run(&["lattice", "--gram", &data("two_a1.json"), "--overlattices", "--json"]));
    assert_eq!(v["disc_orders"], serde_json::json!([2, 2]));
    assert_eq!(v["overlattices"].as_array().unwrap().len(), 1);
    let v = json(&run(&["lattice", "--gram", &data("two_a1.json"), "--overlattices", "--even", "--json"]));
    assert_eq!(v["overlattices"].as_array().unwrap().len(), 0);
}

#[test]
fn construct_input() {
    let o = run(&["construct", "--input", &data("sec10_construct.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let mult: Vec<u64> = v["fibers"].as_array().unwrap().iter().map(|f| f["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mult.iter().filter(|&&m| m == 3).count(), 2);
    assert_eq!(v["autq"]["group"], "Z/3");
    let text = stdout(&run(&["construct", "--input", &data("sec10_construct.json")]));
    assert!(text.contains("contains Z/3"), "{text}");
}

#[test]
fn isotrivial_input() {
    let v = json(&run(&["isotrivial", "--input", &data("r4_psi2.json"), "--json"]));
    assert_eq!(v["e"], 12);
    assert_eq!(v["autz_bound"]["bound"], 2);
    assert_eq!(v["center_check"]["normalizes"], true);
    assert_eq!(v["center_check"]["fixes_singular_points"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["nonsense"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let o = run(&["classify", "--model", &data("bad_model.json"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"]["code"], "singular_model");
    assert_eq!(v["error"]["context"]["command"], "classify");
    assert!(v["error"]["detail"].is_string());

    let o = run(&["classify", "--model", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn verify_paper_passes_and_is_deterministic() {
    let o = run(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));

    let strip = |mut v: Value| {
        for c in v["cases"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let args = ["verify-paper", "--cases", "c15-*", "--seed", "7", "--json"];
    let a = strip(json(&run(&args)));
    let b = strip(json(&run(&args)));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
    assert_eq!(a["failed"], 0);
    let ids: Vec<&str> = a["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.iter().all(|id| id.starts_with("c15-")));

    assert_eq!(run(&["verify-paper", "--cases", "zz*"]).status.code(), Some(1));
}

#[test]
fn color_switch() {
    let plain = run(&["catalog"]);
    assert!(!stdout(&plain).contains('\x1b'));
    let colored = Command::new(env!("CARGO_BIN_EXE_ellsurf"))
        .arg("catalog")
        .env("ELLSURF_COLOR", "1")
        .output()
        .unwrap();
    assert!(stdout(&colored).contains('\x1b'));
}
