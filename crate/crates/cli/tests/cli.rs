use std::process::{Command, Output};

use serde_json::Value;

fn miniw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_miniw"))
        .args(args)
        .env_remove("MINIW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn info_reports_dimensions() {
    let o = miniw(&["info", "spo21", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["odd"], 2);
    assert_eq!(v["sdim"], 1);
    assert_eq!(v["dual_coxeter"], "3/2");
    assert_eq!(v["c_at_k1"], "-81/10");
    assert_eq!(v["gradation"].as_array().unwrap().len(), 5);

    let plain = stdout(&miniw(&["info", "sl2"]));
    assert!(plain.contains("h^v       2"));
    assert!(plain.contains("c(1)      -7"));
}

#[test]
fn wchar_sl2_partitions() {
    let o = miniw(&["wchar", "--algebra", "sl2", "--max-level", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("series   1,1,2,3,5,7"));

    let v = json(&miniw(&["wchar", "--algebra", "sl2", "-k", "1", "--max-level", "5", "--format", "json"]));
    let dims: Vec<i64> = v["series"].as_array().unwrap().iter().map(|e| e["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2, 3, 5, 7]);
    assert_eq!(v["c"], "-7");
}

#[test]
fn wchar_compare_brst_agrees() {
    let o = miniw(&[
        "wchar", "--algebra", "spo21", "--lambda", "k=1/3; x=1/5", "--max-level", "3/2", "--compare-brst", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["brst"]["agree"], true);
    let dims: Vec<i64> = v["brst"]["series"].as_array().unwrap().iter().map(|e| e["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 1, 2]);
}

#[test]
fn cohomology_schema_and_file_output() {
    let path = std::env::temp_dir().join(format!("miniw-cohomology-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = miniw(&[
        "cohomology", "--algebra", "sl2", "--lambda", "k=1/3; x=1/5", "--which", "verma", "--xi-level", "2", "--chain", "0",
        "--depth", "8", "--json", p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["xi"]["dW_offset"], "2");
    assert!(v["xi"]["hf"].as_array().unwrap().is_empty());
    assert_eq!(v["dims"]["-1"], 0);
    assert_eq!(v["dims"]["0"], 2);
    assert_eq!(v["dims"]["1"], 0);
    assert_eq!(v["stabilized"], true);
    assert!(v["window"]["chain"].as_u64().unwrap() <= 8);
}

#[test]
fn cohomology_small_depth_is_a_computation_error() {
    let o = miniw(&["cohomology", "--algebra", "spo21", "--lambda", "k=1/3; x=1/5", "--xi-level", "3/2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cohomology_ambiguous_class_names_field() {
    let o = miniw(&["cohomology", "--algebra", "sl3", "--lambda", "k=1/3; x=1/5; hf=[2/7]", "--xi-level", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("xi_hf"));
    let o = miniw(&[
        "cohomology", "--algebra", "sl3", "--lambda", "k=1/3; x=1/5; hf=[2/7]", "--xi-level", "1", "--xi-hf", "[2/7]",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let h0 = json(&o)["dims"]["0"].clone();
    let w = json(&miniw(&["wchar", "--algebra", "sl3", "--max-level", "1", "--format", "json"]));
    let entry = w["refined"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["level"] == "1" && e["hf"] == serde_json::json!(["0"]))
        .expect("refined entry");
    assert_eq!(h0, entry["dim"]);
}

#[test]
fn verify_spo21() {
    let o = miniw(&["verify", "--algebra", "spo21", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["d^2 = 0: PASS", "(d^chi)^2 = 0: PASS", "(d^st)^2 = 0: PASS", "{d^chi,d^st} = 0: PASS"] {
        assert!(s.contains(line), "missing {line:?} in\n{s}");
    }
}

#[test]
fn char_is_json_map() {
    let o = miniw(&["char", "--algebra", "sl2", "--lambda", "k=1/3; x=1/5", "--which", "verma", "--depth", "1", "--height", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["k=1/3; h=[1/5]; delta=0"], 1);
    assert_eq!(v["k=1/3; h=[1/5]; delta=-1"], 2);
    assert_eq!(v["k=1/3; h=[-4/5]; delta=-1"], 3);
}

#[test]
fn suite_subset_passes() {
    let o = miniw(&["suite", "--criteria", "1,8,9"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("3/3 passed"));
    assert_eq!(miniw(&["suite", "--criteria", "42"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(miniw(&["bogus"]).status.code(), Some(2));
    assert_eq!(miniw(&["info", "e8"]).status.code(), Some(2));
    assert_eq!(miniw(&["char", "--algebra", "sl2", "--lambda", "x=1"]).status.code(), Some(2));
    let o = miniw(&["char", "--algebra", "sl2", "--lambda", "k=1", "--which", "huge"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`which`"));
    let o = miniw(&["wchar", "--algebra", "sl2", "--lambda", "k=1/3; x=1/5", "-k", "2", "--max-level", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`k`"));
}

#[test]
fn threads_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_miniw")).args(["info", "sl2"]).env("MINIW_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_miniw")).args(["info", "sl2"]).env("MINIW_THREADS", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_overrides_flags() {
    let dir = std::env::temp_dir();
    let good = dir.join(format!("miniw-good-{}.json", std::process::id()));
    std::fs::write(&good, r#"{"algebra": "spo21", "format": "json", "max_level": "1"}"#).unwrap();
    let o = miniw(&["wchar", "--algebra", "sl2", "--max-level", "5", "--config", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["algebra"], "spo21");
    assert_eq!(v["series"].as_array().unwrap().len(), 3);

    let bad = dir.join(format!("miniw-bad-{}.json", std::process::id()));
    std::fs::write(&bad, r#"{"height": 3}"#).unwrap();
    let o = miniw(&["verify", "--algebra", "sl2", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`height`"));
    std::fs::remove_file(good).ok();
    std::fs::remove_file(bad).ok();
}

#[test]
fn output_is_deterministic() {
    let args = ["wchar", "--algebra", "sl21", "--lambda", "k=1/3; x=1/5; hf=[2/7]", "--max-level", "3/2", "--format", "json"];
    let a = miniw(&args);
    let b = miniw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
