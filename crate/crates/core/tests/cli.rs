use std::process::{Command, Output};

fn ternary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternary")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariants_json() {
    let o = ternary(&["--json", "invariants", "1,1,16,0,0,0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"], 64);
    assert_eq!(v["divisor_m"], 4);
    assert_eq!(v["level_n"], 64);
}

#[test]
fn repcount_counts() {
    let o = ternary(&["repcount", "1,1,16,0,0,0", "25"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("r(25) = 20"), "{}", stdout(&o));
}

#[test]
fn enumerate_uses_cache_and_csv() {
    let dir = std::env::temp_dir().join(format!("ternary-cli-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let o = ternary(&["--cache-dir", d, "--csv", "enumerate", "--disc", "128"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("genus,a,b,c,r,s,t,automorphisms"));
    assert!(text.contains("1,4,9,4,0,0"));
    assert!(dir.join("128.json").exists());
    let again = ternary(&["--cache-dir", d, "--csv", "enumerate", "--disc", "128"]);
    assert_eq!(stdout(&again), text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn genus_reports_blocks() {
    let o = ternary(&["--json", "genus", "1,1,32,0,0,0", "--bound", "1000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn corresponds_and_ratio_errors() {
    let o = ternary(&["corresponds", "1,1,80,0,0,0", "1,1,16,0,0,0", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("product is scalar: true"));
    let bad = ternary(&["corresponds", "1,1,80,0,0,0", "1,1,16,0,0,0", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn transform_roundtrip() {
    let up = ternary(&["--json", "transform", "1,1,16,0,0,0", "--ascend", "3"]);
    assert!(up.status.success());
    let v: serde_json::Value = serde_json::from_slice(&up.stdout).unwrap();
    let image: Vec<String> = v["result"].as_array().unwrap().iter().map(ToString::to_string).collect();
    let image = image.join(",");
    let down = ternary(&["--json", "transform", &image, "--descend", "3", "--all-witnesses"]);
    assert!(down.status.success());
    let w: serde_json::Value = serde_json::from_slice(&down.stdout).unwrap();
    assert_eq!(w["reduced"], serde_json::json!([1, 1, 16, 0, 0, 0]));
    assert!(w["all"].as_array().unwrap().contains(&serde_json::json!([2, 2, 5, 2, 2, 0])));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ternary(&["verify", "repdiff", "--kmax", "15"]).status.code(), Some(0));
    assert_eq!(ternary(&["verify", "involution-400n", "--n", "21"]).status.code(), Some(1));
    assert_eq!(ternary(&["verify", "respects-spinor", "--deltaratio", "4"]).status.code(), Some(2));
    assert_eq!(ternary(&["verify", "no-such-task"]).status.code(), Some(2));
    assert_eq!(ternary(&["invariants", "1,2"]).status.code(), Some(2));
}

#[test]
fn verify_report_json() {
    let o = ternary(&["--json", "--seed", "7", "verify", "kaplansky-identity", "--samples", "100"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "verified");
    assert_eq!(v["parameters"]["seed"], 7);
    assert!(v["runtime_ms"].is_u64());
}
