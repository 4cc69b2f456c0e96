use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn pta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pta"))
        .args(args)
        .output()
        .expect("pta runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn analyze_steens_dot_groups_strings() {
    let o = pta(&[
        "analyze",
        &fixture("p1.ir"),
        "--variant",
        "steens-ci",
        "--emit",
        "dot",
    ]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph \"whole-program\" {"));
    let s_edge = dot
        .lines()
        .find(|l| l.starts_with("  \"r:bar.s\" -> "))
        .expect("edge from s");
    let group = s_edge.trim_end_matches(';').rsplit(' ').next().unwrap();
    let label = dot
        .lines()
        .find(|l| l.starts_with(&format!("  {group} [shape=box")))
        .unwrap();
    for h in ["H0.a", "H1.a", "H2.a", "H10.a"] {
        assert!(label.contains(h), "{h} missing from {label}");
    }
}

#[test]
fn analyze_tea_json_has_no_foreign_objects_in_foo() {
    let o = pta(&[
        "analyze",
        &fixture("p1.ir"),
        "--variant",
        "tea-dsa",
        "--emit",
        "json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["metrics"]["functions"]["foo"]["foreign"], 0);
    let groups = v["functions"]["foo"]["groups"].as_array().unwrap();
    let objects: Vec<&str> = groups
        .iter()
        .flat_map(|g| g["objects"].as_array().unwrap())
        .map(|o| o.as_str().unwrap())
        .collect();
    assert!(objects
        .iter()
        .all(|o| !o.starts_with("V.bar") && !o.starts_with("V.main")));
}

#[test]
fn analyze_function_filter_and_unknown_function() {
    let o = pta(&["analyze", &fixture("p1.ir"), "--function", "foo"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["functions"].as_object().unwrap().len(), 1);
    let o = pta(&["analyze", &fixture("p1.ir"), "--function", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn empty_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.ir");
    std::fs::write(&path, "").unwrap();
    let o = pta(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no functions"));
}

#[test]
fn invalid_program_and_bad_flags_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ir");
    std::fs::write(&path, "fun main(): 0 {\n  (x) = missing()\n  return\n}\n").unwrap();
    assert_eq!(
        pta(&["analyze", path.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        pta(&["analyze", &fixture("p1.ir"), "--variant", "nope"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn check_reports_and_fail_on_alias() {
    let f = fixture("overflow/01_store_past_single.ir");
    let o = pta(&["check", &f, "--variant", "andersen-ci"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["checks"], 1);
    assert_eq!(v["aliases"][0]["instr"], 3);
    assert_eq!(v["aliases"][0]["site"], 0);
    assert_eq!(
        pta(&["check", &f, "--variant", "andersen-ci", "--fail-on-alias"])
            .status
            .code(),
        Some(3)
    );
    let clean = fixture("overflow/03_no_field_b.ir");
    let o = pta(&["check", &clean, "--fail-on-alias"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["aliases"], serde_json::json!([]));
}

#[test]
fn diff_p2_tea_against_pfs() {
    let o = pta(&["diff", &fixture("p2.ir"), "--variant", "tea-dsa", "pfs-dsa"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["alias"]["only_left"], serde_json::json!([]));
    let right = v["alias"]["only_right"].as_array().unwrap();
    assert!(right.contains(&serde_json::json!(["baz.a", "baz.f"])));
}

#[test]
fn diff_identical_variants_is_empty() {
    let o = pta(&["diff", &fixture("p1.ir"), "--variant", "dsa", "dsa"]);
    assert_eq!(json(&o)["alias"]["empty"], true);
}

#[test]
fn oracle_exit_codes() {
    let o = pta(&["oracle", &fixture("p1.ir")]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(
        pta(&[
            "oracle",
            &fixture("p2.ir"),
            "--variant",
            "dsa",
            "--fact-limit",
            "5"
        ])
        .status
        .code(),
        Some(4)
    );
    let o = pta(&[
        "oracle",
        &fixture("p1.ir"),
        "--variant",
        "dsa",
        "--inject-fault",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).lines().any(|l| l.starts_with("> ")));
    assert_eq!(
        pta(&["oracle", &fixture("p1.ir"), "--variant", "dsa-legacy-td"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn gen_writes_valid_programs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.ir");
    let o = pta(&[
        "gen",
        "--seed",
        "1",
        "--functions",
        "3",
        "--instrs",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(pta(&["analyze", path.to_str().unwrap()]).status.success());
    let single = pta(&["gen", "--seed", "4", "--functions", "1", "--instrs", "20"]);
    assert!(!stdout(&single).contains(" = f"));
}

#[test]
fn every_command_is_byte_stable() {
    let p1 = fixture("p1.ir");
    let p2 = fixture("p2.ir");
    let ov = fixture("overflow/20_self_loop.ir");
    let runs: Vec<Vec<&str>> = vec![
        vec!["analyze", &p1, "--variant", "dsa", "--emit", "json"],
        vec!["analyze", &p1, "--variant", "tea-dsa", "--emit", "dot"],
        vec!["analyze", &p2, "--variant", "pfs-dsa", "--emit", "metrics"],
        vec!["analyze", &p1, "--variant", "dsa-legacy-td"],
        vec!["check", &ov, "--variant", "andersen-ci"],
        vec!["diff", &p1, "--variant", "dsa", "pfs-dsa"],
        vec!["oracle", &p2],
        vec!["gen", "--seed", "9", "--functions", "4", "--instrs", "25"],
    ];
    for args in runs {
        let (a, b) = (pta(&args), pta(&args));
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
