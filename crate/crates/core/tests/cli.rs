use std::process::Command;

use flab::report::Report;

fn flab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flab")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn pipeline_s4_passes() {
    let (code, text) = flab(&["--json", "pipeline", "s4-d8"]);
    assert_eq!(code, 0);
    let r = Report::from_json(&text).unwrap();
    assert!(r.passed());
    assert_eq!(r.find("out_typ").unwrap().get("classes").unwrap(), 1);
}

#[test]
fn pipeline_is_deterministic() {
    let a = flab(&["pipeline", "a6-d8"]);
    let b = flab(&["pipeline", "a6-d8"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

#[test]
fn sylow_family_fails_with_witness() {
    let (code, text) = flab(&["--json", "pipeline", "s4-d8", "--family", "{S}"]);
    assert_eq!(code, 1);
    let r = Report::from_json(&text).unwrap();
    let w = r.find("fusion of the amalgam").unwrap().get("witness").unwrap();
    assert!(w.as_str().unwrap().contains("only in F"));
}

#[test]
fn exit_codes() {
    assert_eq!(flab(&["pipeline", "no-such-entry"]).0, 2);
    assert_eq!(flab(&["amalgam", "reduce", "a6-d8", "--word", "leaf9:x"]).0, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_flab"))
        .args(["fusion", "analyze", "a6-d8"])
        .env("FLAB_MAX_ORDER", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gamma_output_feeds_omega() {
    let (code, text) = flab(&["--json", "aut", "gamma", "a6-d8", "--class", "2"]);
    assert_eq!(code, 0);
    let r = Report::from_json(&text).unwrap();
    let dir = std::env::temp_dir().join(format!("flab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("auto.json");
    std::fs::write(&path, r.get("automorphism").unwrap().to_string()).unwrap();
    let (code, text) = flab(&["--json", "aut", "omega", "a6-d8", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let o = Report::from_json(&text).unwrap();
    assert_eq!(o.get("class").unwrap(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn linking_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("flab-link-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s4.json");
    let (code, _) = flab(&["linking", "build", "s4-d8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, text) = flab(&["--json", "linking", "validate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(Report::from_json(&text).unwrap().get("objects").unwrap(), 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn limits_and_examples() {
    let (code, text) = flab(&["--json", "limits", "a6-d8", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(Report::from_json(&text).unwrap().get("value").unwrap(), "Z/2");
    let (code, text) = flab(&["--json", "examples", "list"]);
    assert_eq!(code, 0);
    assert!(Report::from_json(&text).unwrap().children.len() >= 4);
}
