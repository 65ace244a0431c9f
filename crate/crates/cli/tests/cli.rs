use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkoszul")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("nkoszul-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn dims(v: &Value, key: &str) -> Vec<u64> {
    v["dims"][key].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn dual_of_truncated_one_loop() {
    let (code, r) = report(&["dual", &data("one_loop_truncated_n3.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["orthogonal"]["agree"], true);
    assert!(dims(&r, "dual").iter().all(|&d| d == 1));
    assert!(dims(&r, "e").iter().all(|&d| d == 1));
}

#[test]
fn dual_of_commutative_plane() {
    let (code, r) = report(&["dual", &data("commutative_two_loop_n2.json")]);
    assert_eq!(code, 0);
    assert_eq!(dims(&r, "dual")[..4], [1, 2, 1, 0]);
    assert_eq!(r["orthogonal"]["dual_basis"].as_array().unwrap().len(), 3);
}

#[test]
fn dual_without_relations_vanishes_from_degree_n() {
    let doc = r#"{"quiver": {"vertices": 2, "arrows": [{"name": "a", "source": 0, "target": 1},
                 {"name": "b", "source": 1, "target": 0}]}, "n": 3, "window": 6}"#;
    let (code, r) = report(&["dual", &scratch("free.json", doc)]);
    assert_eq!(code, 0);
    assert_eq!(dims(&r, "dual"), [2, 2, 2, 0, 0, 0, 0]);
}

#[test]
fn functor_on_zero_and_simple() {
    let f = data("one_loop_truncated_n3.json");
    let (code, r) = report(&["functor", &f, "--which", "psi", "--module", "Z"]);
    assert_eq!(code, 0);
    assert_eq!(r["complex"]["terms"].as_array().unwrap().len(), 0);
    assert_eq!(
        (r["is_n_complex"].clone(), r["annihilates_orthogonal"].clone()),
        (Value::Bool(true), Value::Bool(true))
    );
    let (code, r) = report(&["functor", &f, "--which", "nu", "--module", "S"]);
    assert_eq!(code, 0);
    assert_eq!(r["complex"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(r["is_n_complex"], true);
}

#[test]
fn functor_oracle_on_a_free_module() {
    let f = data("commutative_two_loop_n2.json");
    let (code, r) = report(&["functor", &f, "--which", "psi", "--module", "F", "--allow-windowed-dual"]);
    assert_eq!(code, 0);
    assert_eq!(r["agree"], true);
    assert_eq!(r["annihilates_orthogonal"], false);
}

#[test]
fn nu_on_infinite_algebra_needs_the_flag() {
    let f = data("commutative_two_loop_n2.json");
    assert_eq!(run(&["functor", &f, "--which", "nu", "--module", "K"]).status.code(), Some(2));
    assert_eq!(run(&["functor", &f, "--which", "nu", "--module", "K", "--allow-windowed-dual"]).status.code(), Some(0));
}

#[test]
fn contraction_reports() {
    let f = data("two_loop_truncated_n3.json");
    let (code, r) = report(&["contract", &f, "--complex", "nu_S"]);
    assert_eq!(code, 0);
    assert_eq!(r["is_2_complex"], true);
    assert_eq!(r["kernel_is_t_star"], true);
    assert_eq!(r["in_T_star"], false);
    let (code, r) = report(&["contract", &f, "--complex", "nu_S", "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["in_T_star"], true);
    assert_eq!(r["contraction_is_zero"], true);
}

#[test]
fn membership_checks() {
    let one = data("one_loop_truncated_n3.json");
    let (code, r) = report(&["check", &one, "--predicate", "in_Y", "--object", "h_nu_M"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], true);
    assert_eq!(r["witness"]["extracted_module"]["dims"], serde_json::json!([[1], [1]]));
    let (_, r) = report(&["check", &one, "--predicate", "in_L_E", "--object", "P"]);
    assert_eq!(r["verdict"], true);
    let two = data("two_loop_truncated_n3.json");
    let (_, r) = report(&["check", &two, "--predicate", "in_T_star", "--object", "nu_S"]);
    assert_eq!(r["verdict"], false);
    let (_, r) = report(&["check", &two, "--predicate", "n_koszul", "--object", "lambda", "--bound", "3"]);
    assert_eq!(r["verdict"], true);
    assert_eq!(run(&["check", &two, "--predicate", "frobenius", "--object", "S"]).status.code(), Some(2));
}

#[test]
fn torsion_parameters() {
    let one = data("one_loop_truncated_n3.json");
    let (code, r) = report(&["check", &one, "--predicate", "torsionfree", "--object", "M"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], false);
    assert_eq!(r["witness"]["torsion_submodule_dims"]["2"], 1);
    assert_eq!(run(&["functor", &one, "--which", "nu", "--module", "M", "--r", "2"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_mutation_fails() {
    let (code, r) = report(&["verify", "--suite", "prop21", "--trials", "50", "--seed", "42"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], 50);
    let (code, r) = report(&["verify", "--suite", "prop22", "--trials", "50", "--mutate"]);
    assert_eq!(code, 1);
    let ce = &r["failures"][0]["counterexample"];
    assert!(ce["modules"]["M"].is_object());
}

#[test]
fn verify_on_an_input_presentation() {
    let f = data("commutative_two_loop_n2.json");
    let (code, r) = report(&["verify", &f, "--suite", "prop22", "--trials", "10"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], 10);
    assert_eq!(run(&["verify", &f, "--suite", "thm43"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let p = scratch("report.json", "");
    let mut seen = vec![];
    for _ in 0..2 {
        let out = run(&["verify", "--suite", "lemma32", "--trials", "5", "--seed", "9", "--report", &p]);
        assert_eq!(out.status.code(), Some(0));
        seen.push(std::fs::read(&p).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch("bad.json", "{\"quiver\": {\"vertices\": 1,\n \"arrows\": [}");
    let out = run(&["dual", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let unknown_arrow = scratch(
        "arrow.json",
        r#"{"quiver": {"vertices": 1, "arrows": [{"name": "x", "source": 0, "target": 0}]},
            "n": 2, "relations": [[[1, "x.z"]]]}"#,
    );
    let out = run(&["dual", &unknown_arrow]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("relations[0][0]"));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["dual", "/nonexistent.json"]).status.code(), Some(2));
}
