use std::process::{Command, Output};

fn bext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bext")).args(args).output().expect("runs")
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let a = bext(&["verify", "EX3", "--seed", "7", "--format", "json"]);
    let b = bext(&["verify", "EX3", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"seed\": 7"));
    assert!(!text.contains("\"status\": \"fail\""));
}

#[test]
fn exit_codes() {
    assert_eq!(bext(&["verify", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(bext(&["verify", "EX3", "--suite", "galois"]).status.code(), Some(2));
    assert_eq!(bext(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bext(&["verify", "EX4", "--suite", "classify"]).status.code(), Some(0));
}

#[test]
fn scenario_files_and_failures() {
    let dir = std::env::temp_dir().join(format!("bext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("ex2.scn");
    std::fs::write(&good, "name MINE\nbase p=2 vars=t\nstep s: s^2 + s + t\ncheck classify skew\n").unwrap();
    let out = dir.join("report.json");
    let r = bext(&["verify", good.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let json = std::fs::read_to_string(&out).unwrap();
    assert!(json.contains("\"scenario\": \"MINE\""));
    assert!(json.contains("\"is_G\": true"));

    // a wrong expectation is a failing check, not a usage error
    let wrong = dir.join("wrong.scn");
    std::fs::write(&wrong, "name WRONG\nbase p=2 vars=t\nstep u: u^2 + t\nexpect d=3\n").unwrap();
    let r = bext(&["verify", wrong.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stdout).contains("MISMATCH d: expected 3, got 4"));

    let bad = dir.join("bad.scn");
    std::fs::write(&bad, "name BAD\nbase p=2 vars=t\nstep u: u^^2\n").unwrap();
    let r = bext(&["verify", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("col"));

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn catalog_describe_and_fuzz() {
    let r = bext(&["catalog"]);
    assert_eq!(r.status.code(), Some(0));
    let names = String::from_utf8(r.stdout).unwrap();
    assert!(names.lines().count() >= 8);
    assert!(names.lines().any(|l| l.starts_with("EX5")));

    let r = bext(&["describe", "EX5"]);
    let d = String::from_utf8(r.stdout).unwrap();
    assert!(d.contains("[L:K] = 8"));
    assert!(d.contains("dim D    64"));

    let r = bext(&["fuzz", "--seed", "3", "--count", "3", "--max-degree", "4"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8(r.stdout).unwrap().starts_with("seed 3: 3 passed, 0 failed"));
}
