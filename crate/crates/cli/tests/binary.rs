use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../core/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn intres(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_intres")).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn intgldim_of_small_grid() {
    let (v, code) = intres(&["intgldim", "2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["intgldim"], 1);
    let (v, _) = intres(&["intgldim", "--grid", "2", "2"]);
    assert_eq!(v["intgldim"], 0);
}

#[test]
fn resolve_and_depth_limit() {
    let path = fixture("g23_intdim1.json");
    let (v, code) = intres(&["intdim", &path]);
    assert_eq!((v["intdim"].as_u64(), code), (Some(1), 0));
    let (v, code) = intres(&["--max-depth", "0", "resolve", &path]);
    assert_eq!(code, 3);
    assert!(v["error"].is_string());
}

#[test]
fn check_passes_on_worked_example() {
    let (v, code) = intres(&["check", &fixture("ladder_g42.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["checks"]["delta"], true);
}

#[test]
fn compress_reports_multiplicity() {
    let iv = r#"{"staircase": [[1, 2, 4], [2, 2, 3]]}"#;
    let (v, code) = intres(&["compress", &fixture("ladder_g42.json"), "--interval", iv]);
    assert_eq!(code, 0);
    assert_eq!(v["multiplicity"], 1);
}

#[test]
fn bad_input_is_exit_two() {
    let (v, code) = intres(&["resolve", "/nonexistent.json"]);
    assert_eq!(code, 2);
    assert!(v["error"].is_string());
    let (_, code) = intres(&["--field", "4", "intgldim", "2", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn random_output_round_trips_through_check() {
    let dir = std::env::temp_dir().join(format!("intres-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for mode in ["planted", "perturbed", "presented"] {
        let (v, code) = intres(&["--seed", "9", "--field", "3", "random", "--grid", "3", "2", "--mode", mode]);
        assert_eq!(code, 0);
        let path = dir.join(format!("{mode}.json"));
        std::fs::write(&path, v.to_string()).unwrap();
        let (c, code) = intres(&["check", path.to_str().unwrap()]);
        assert_eq!((c["ok"].as_bool(), code), (Some(true), 0), "{mode}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
