use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn tamediv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamediv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn crossed_on_finite_residue_field() {
    let o = tamediv(&["crossed", fixture("skeleton_finite.json").to_str().unwrap(), "--text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Crossed (finite-residue-field)\n");
}

#[test]
fn classify_gaussian_fiber() {
    let o = tamediv(&["classify-fiber", fixture("fiber_qi.json").to_str().unwrap(), "--text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "NoncrossedExist, n2=5\n");
}

#[test]
fn unsatisfiable_cover_exits_two() {
    let o = tamediv(&["cover-search", "--z", r#"{"conductor":1,"subgroup":[0]}"#, "--m", "2", "--demand", "inf:3"]);
    assert_eq!(o.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["cover"].is_null());
    assert!(doc["rationale"].as_str().unwrap().contains("archimedean"));
}

#[test]
fn cover_search_finds_minimal_conductor() {
    let z = fixture("field_q.json");
    let o = tamediv(&["cover-search", "--z", z.to_str().unwrap(), "--m", "2", "--demand", "3:2", "--demand", "5:2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["cover"]["conductor"], 3);
}

#[test]
fn input_errors_exit_one() {
    let o = tamediv(&["validate", fixture("skeleton_nonsquare.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("perfect square"));

    let dir = std::env::temp_dir().join(format!("tamediv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"residue\": {\"kind\": \"GlobalQ\"},\n  \"gammaF\": [\n").unwrap();
    let o = tamediv(&["validate", bad.to_str().unwrap(), "--text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line "), "{}", stdout(&o));

    let o = tamediv(&["validate", fixture("skeleton_mixed.json").to_str().unwrap(), "--rank", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn environment_overrides_bounds() {
    let z = fixture("field_q.json");
    let args = ["cover-search", "--z", z.to_str().unwrap(), "--m", "2", "--demand", "7:2", "--demand", "inf:2"];
    let o = Command::new(env!("CARGO_BIN_EXE_tamediv"))
        .args(args)
        .env("TAMEDIV_CONDUCTOR_BOUND", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(tamediv(&args).status.code(), Some(0));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("tamediv-out-{}.json", std::process::id()));
    let o = tamediv(&["validate", fixture("skeleton_semiramified.json").to_str().unwrap(), "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["deg_D"], 2);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn witness_with_trace() {
    let o = tamediv(&["witness", fixture("fiber_qi.json").to_str().unwrap(), "--m", "32", "--trace", "--exclude", "7,11"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["m"], 32);
    assert_eq!(doc["S"], serde_json::json!(["19", "23"]));
    assert!(doc["trace"].as_array().unwrap().iter().any(|s| s["step"] == "refutation"));
}
