use std::path::{Path, PathBuf};
use std::process::Command;

use bochvar_core::algebra::find_isomorphism;
use bochvar_core::fixtures::wke;
use bochvar_core::io;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_bochvar-lab")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_bca_on_generator() {
    let r = run(&["check", path(&fixture("wke.alg")), "--set", "BCA"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().filter(|l| l.ends_with(": HOLDS")).count(), 13);
}

#[test]
fn check_v_fails_on_generator() {
    let r = run(&["check", path(&fixture("wke.alg")), "--set", "V"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.lines().any(|l| l == "V.extra: FAILS at x=half"), "{}", r.stdout);
}

#[test]
fn check_ba_on_two_element_algebra() {
    assert_eq!(run(&["check", path(&fixture("b2.alg")), "--set", "BA"]).code, 0);
}

#[test]
fn check_rejects_unknown_set_and_bad_files() {
    let r = run(&["check", path(&fixture("wke.alg")), "--set", "XYZ"]);
    assert_eq!(r.code, 2);
    assert!(!r.stderr.is_empty());
    assert_eq!(run(&["check", "/nonexistent.alg", "--set", "K"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, r#"{"name": "X", "elements": ["a"], "ops": {"zero": "a", "one": "b", "not": {}, "and": [], "or": []}}"#).unwrap();
    let r = run(&["check", bad.to_str().unwrap(), "--set", "K"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unknown element `b`"), "{}", r.stderr);
}

#[test]
fn check_without_j2_is_an_input_error() {
    assert_eq!(run(&["check", path(&fixture("wk.alg")), "--set", "K"]).code, 2);
    assert_eq!(run(&["check", path(&fixture("wk.alg")), "--set", "IBSL"]).code, 0);
}

#[test]
fn holds_reports_counterexample() {
    let r = run(&["holds", path(&fixture("wke.alg")), "x | -x = 1"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "x | -x = 1: FAILS at x=half");
    assert_eq!(run(&["holds", path(&fixture("wke.alg")), "x & y = y & x"]).code, 0);
    assert_eq!(run(&["holds", path(&fixture("wke.alg")), "x & = y"]).code, 2);
}

#[test]
fn sys2alg_full_b2_gives_generator() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.alg");
    let r = run(&["sys2alg", path(&fixture("b2-full.sys")), "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let a = io::parse_algebra(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(a.size(), 3);
    assert!(find_isomorphism(&a, &wke()).unwrap().is_some());
}

#[test]
fn sys2alg_b4_with_atom_has_six_elements() {
    let r = run(&["sys2alg", path(&fixture("b4-1p.sys"))]);
    assert_eq!(r.code, 0);
    assert_eq!(io::parse_algebra(&r.stdout).unwrap().size(), 6);
}

#[test]
fn alg2sys_generator() {
    let r = run(&["alg2sys", path(&fixture("wke.alg"))]);
    assert_eq!(r.code, 0);
    let s = io::parse_system(&r.stdout).unwrap();
    assert_eq!(s.to_string(), "<B2,{0,1}>");
}

#[test]
fn emitted_files_reparse_to_the_same_object() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("w.sys");
    assert_eq!(run(&["alg2sys", path(&fixture("wke.alg")), "-o", sys.to_str().unwrap()]).code, 0);
    let s = io::parse_system(&std::fs::read_to_string(&sys).unwrap()).unwrap();
    assert_eq!(io::system_to_json(&s), std::fs::read_to_string(&sys).unwrap());

    let alg = dir.path().join("w.alg");
    assert_eq!(run(&["sys2alg", sys.to_str().unwrap(), "-o", alg.to_str().unwrap()]).code, 0);
    let text = std::fs::read_to_string(&alg).unwrap();
    assert_eq!(io::algebra_to_json(&io::parse_algebra(&text).unwrap()), text);

    let d = dir.path().join("w.dsys");
    assert_eq!(run(&["decompose", path(&fixture("wke.alg")), "-o", d.to_str().unwrap()]).code, 0);
    let text = std::fs::read_to_string(&d).unwrap();
    assert_eq!(io::direct_system_to_json(&io::parse_direct_system(&text).unwrap()), text);
}

#[test]
fn roundtrips() {
    let r = run(&["roundtrip", path(&fixture("wke.alg"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("isomorphism: "));
    assert_eq!(run(&["roundtrip", path(&fixture("b4-1p.sys"))]).code, 0);
}

#[test]
fn roundtrip_on_corrupted_j2_is_rejected_at_validation() {
    let mut spec = wke().to_spec();
    spec.ops.j2.as_mut().unwrap().insert("half".into(), "1".into());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, serde_json::to_string(&spec).unwrap()).unwrap();
    let r = run(&["roundtrip", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not a Bochvar algebra"), "{}", r.stderr);
}

#[test]
fn enumerate_counts() {
    let last = |r: &Run| r.stdout.lines().last().unwrap().to_string();
    let r = run(&["enumerate", "--atoms", "0"]);
    assert_eq!((r.code, last(&r)), (0, "systems: 1, passed: 1".to_string()));
    let r = run(&["enumerate", "--atoms", "1"]);
    assert_eq!((r.code, last(&r)), (0, "systems: 2, passed: 2".to_string()));
    let r = run(&["enumerate", "--atoms", "2"]);
    assert_eq!((r.code, last(&r)), (0, "systems: 7, passed: 7".to_string()));
    let r = run(&["enumerate", "--atoms", "2", "--cumulative"]);
    assert_eq!((r.code, last(&r)), (0, "systems: 10, passed: 10".to_string()));
    assert_eq!(run(&["enumerate", "--atoms", "4"]).code, 2);
}

#[test]
fn tautologies() {
    assert_eq!(run(&["taut", "J2 x | -J2 x", "--logic", "Be"]).code, 0);
    let r = run(&["taut", "x | -x", "--logic", "Be"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("x=half"));
    assert_eq!(run(&["taut", "x | -x", "--logic", "PWKe"]).code, 0);
    assert_eq!(run(&["taut", "x | -x", "--logic", "Kleene"]).code, 2);
}

#[test]
fn forced_j2_and_forbidden_configuration() {
    let r = run(&["jdef", path(&fixture("wk.alg"))]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("J2 half = 0"));
    let dir = tempfile::tempdir().unwrap();
    let forb = dir.path().join("forb.alg");
    assert_eq!(run(&["plonka", path(&fixture("forb.dsys")), "-o", forb.to_str().unwrap()]).code, 0);
    let r = run(&["jdef", forb.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.lines().last().unwrap().starts_with("K10: FAILS"));
    let r = run(&["forbidden", forb.to_str().unwrap(), "--json"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["tables"], serde_json::json!([]));
    assert_eq!(v["candidate_space"], "128");
    assert_eq!(run(&["jdef", path(&fixture("b4-1p.sys"))]).code, 2);
}

#[test]
fn json_output_is_machine_readable() {
    let r = run(&["check", path(&fixture("wke.alg")), "--set", "V", "--json"]);
    assert_eq!(r.code, 1);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["passes"], false);
    assert_eq!(v["items"][12]["counterexample"], "x=half");
    let r = run(&["--json", "classify", path(&fixture("wke.alg"))]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["memberships"]["BCA"], true);
    assert_eq!(v["hs_wke"], "WKe");
}

#[test]
fn reports_are_deterministic() {
    let wke = fixture("wke.alg");
    for args in [vec!["classify", path(&wke)], vec!["enumerate", "--atoms", "2"]] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout);
    }
}
