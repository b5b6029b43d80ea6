use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tgrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgrs")).args(args).env_remove("TGRS_MAX_FIELD").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn recipe(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../recipes").join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn dump_examples(dir: &TempDir) -> PathBuf {
    let d = dir.path().join("inst");
    let o = tgrs(&["verify-paper", "--dump-instances", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    d
}

#[test]
fn construct_block1() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("inst.json");
    let o = tgrs(&["construct", "--recipe", &recipe("block1.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["alpha"].as_array().unwrap().len(), 8);
    assert_eq!(v["report"]["d"], 5);
    assert!(v["provenance"].is_object());
}

#[test]
fn every_bundled_recipe_constructs() {
    let dir = TempDir::new().unwrap();
    for name in ["block2", "block3", "line1", "line2", "block4", "block5", "block6", "line3", "line4", "block5-search"] {
        let out = dir.path().join(format!("{name}.json"));
        let o = tgrs(&["--format", "structured", "construct", "--recipe", &recipe(&format!("{name}.json")), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        // the written instance replays through analyze
        let a = tgrs(&["analyze", "--in", out.to_str().unwrap(), "--expect-so"]);
        assert_eq!(code(&a), 0, "{name}: {}", stdout(&a));
    }
}

#[test]
fn construct_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"id":"block2","params":{"p":2,"s":2,"t":1,"a":0,"b":1,"c":0}}"#);
    let o = tgrs(&["construct", "--recipe", &bad]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ParamConstraintViolation"));
    // x^5 + x^4 + 2x^3 + 2 splits over GF(5^3), and 125 ≡ 5 mod 8
    let l3 = write(&dir, "l3.json", r#"{"id":"line3","params":{"p":5,"s":1,"coeffs":[1,2],"c":2}}"#);
    let o = tgrs(&["construct", "--recipe", &l3]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ParamConstraintViolation"));
    let junk = write(&dir, "junk.json", "{");
    let o = tgrs(&["construct", "--recipe", &junk]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Parse"));
}

#[test]
fn field_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_tgrs"))
        .args(["construct", "--recipe", &recipe("block2.json")])
        .env("TGRS_MAX_FIELD", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("SplittingFieldTooLarge"));
    let o = Command::new(env!("CARGO_BIN_EXE_tgrs")).args(["verify-paper", "--only", "block1"]).env("TGRS_MAX_FIELD", "x").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn analyze_examples() {
    let dir = TempDir::new().unwrap();
    let d = dump_examples(&dir);
    let block3 = d.join("block3.json");
    let o = tgrs(&["analyze", "--in", block3.to_str().unwrap(), "--expect-d", "5", "--expect-sd", "--expect-mds"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("[8,4,5]"));
    let o = tgrs(&["analyze", "--in", block3.to_str().unwrap(), "--expect-d", "6"]);
    assert_eq!(code(&o), 1);
    let line2 = d.join("line2.json");
    let o = tgrs(&["--format", "structured", "analyze", "--in", line2.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()), (Some(8), Some(4), Some(5)));
    assert_eq!(v["field"]["h"], 15);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["mds_class"], "MDS");
    let line1 = d.join("line1-1.json");
    let o = tgrs(&["analyze", "--in", line1.to_str().unwrap(), "--checks", "dmin,mds", "--expect-mds"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NMDS"));
}

#[test]
fn quantum_needs_self_orthogonality() {
    let dir = TempDir::new().unwrap();
    let d = dump_examples(&dir);
    let o = tgrs(&["quantum", "--in", d.join("block2.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[[9,1,5]]"));
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(d.join("block1.json")).unwrap()).unwrap();
    v["twist"] = serde_json::json!({ "shape": "A1", "entries": [["1", "1"], ["1", "0"]] });
    let p = write(&dir, "nso.json", &v.to_string());
    let o = tgrs(&["analyze", "--in", &p, "--checks", "quantum"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("NotSelfOrthogonal"));
    let o = tgrs(&["quantum", "--in", &p]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_paper_filters() {
    let o = tgrs(&["verify-paper", "--only", "block2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("[9,4,6]") && out.contains("[9,5,5]") && out.contains("[[9,1,5]]"));
    assert!(out.contains("1/1 example cases pass"));
    let o = tgrs(&["verify-paper", "--only", "line1"]);
    assert!(stdout(&o).contains("2/2 example cases pass"));
    let o = tgrs(&["verify-paper", "--only", "block4"]);
    assert!(stdout(&o).contains("suspected erratum"));
    let o = tgrs(&["verify-paper", "--only", "nope"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn property_suite_is_reproducible() {
    let args = ["--format", "structured", "property-suite", "--seed", "7", "--only", "mds,lambda,parity"];
    let (a, b) = (tgrs(&args), tgrs(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn injected_sign_flip_is_reported() {
    let dir = TempDir::new().unwrap();
    let cx = dir.path().join("cx");
    let o = tgrs(&["property-suite", "--only", "so-differential", "--inject", "sign-flip", "--out", cx.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let files: Vec<_> = std::fs::read_dir(&cx).unwrap().collect();
    assert!(!files.is_empty());
    // dumped files are instance files
    let f = files[0].as_ref().unwrap().path();
    let a = tgrs(&["analyze", "--in", f.to_str().unwrap(), "--checks", "so"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
}

#[test]
fn clean_suite_passes() {
    let dir = TempDir::new().unwrap();
    let o = tgrs(&["property-suite", "--seed", "1", "--out", dir.path().join("cx").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("self-orthogonality table sweep"));
    assert!(!dir.path().join("cx").exists());
}
