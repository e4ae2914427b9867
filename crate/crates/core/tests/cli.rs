use std::path::Path;
use std::process::{Command, Output};

fn pdpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdpc")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CHORD: &str = "pdpc-instance v1
n 4
pair 0 2
hole 0 1 2 3
ell 1
";

const CROSSING: &str = "pdpc-instance v1
n 4
pair 0 2
pair 1 3
hole 0 1 2 3
ell 3
";

#[test]
fn solve_yes_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", CHORD);
    let sol = dir.path().join("s.txt");
    let o = pdpc(&["solve", &inst, "--out", sol.to_str().unwrap(), "--oracle", "--certify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("YES size 1"));
    assert!(out.contains("ORACLE 1"));
    assert!(out.contains("CERTIFIED patch 1 edges"));
    let v = pdpc(&["verify", &inst, sol.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
}

#[test]
fn solve_no_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", CROSSING);
    let o = pdpc(&["solve", &inst]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("infeasible up to patch_bound(k)"));
    let m = pdpc(&["solve", &inst, "--min"]);
    assert!(stdout(&m).contains("MIN none"));
}

#[test]
fn budget_override() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", CHORD);
    let o = pdpc(&["solve", &inst, "--ell", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("at most 0 edges"));
}

#[test]
fn verify_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", CHORD);
    let off = write(dir.path(), "off.txt", "pdpc-solution v1\npatch 0 7\npath 0 7 2\n");
    let o = pdpc(&["verify", &inst, &off]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("endpoint off boundary"));

    let inst2 = write(
        dir.path(),
        "i2.txt",
        "pdpc-instance v1\nn 5\npair 0 2\npair 1 3\nhole 0 1 2 3 4\nell 2\n",
    );
    let clash = write(dir.path(), "c.txt", "pdpc-solution v1\npatch 0 4\npatch 2 4\npath 0 4 2\npath 1 4 3\n");
    let o = pdpc(&["verify", &inst2, &clash]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("INVALID"), "{out}");
}

#[test]
fn disjointness_message() {
    let dir = tempfile::tempdir().unwrap();
    // both paths run through vertex 4
    let inst = write(
        dir.path(),
        "i.txt",
        "pdpc-instance v1\nn 5\nedge 0 4\nedge 4 1\nrot 0 0.0\nrot 1 1.1\nrot 4 0.1 1.0\npair 0 1\npair 2 3\nhole 0 2 1 3\nell 2\n",
    );
    let sol = write(dir.path(), "s.txt", "pdpc-solution v1\npatch 2 0\npatch 1 3\npath 0 4 1\npath 2 0 4 1 3\n");
    let o = pdpc(&["verify", &inst, &sol]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("disjointness violated"), "{}", stdout(&o));
}

#[test]
fn gen_families_and_usage_errors() {
    for fam in ["cycle-terminals", "two-holes", "inactive-padding", "random"] {
        let o = pdpc(&["gen", "--family", fam, "--seed", "3"]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).starts_with("pdpc-instance v1"));
        assert_eq!(stdout(&o), stdout(&pdpc(&["gen", "--family", fam, "--seed", "3"])));
    }
    assert_eq!(code(&pdpc(&["gen", "--family", "nope"])), 2);
    assert_eq!(code(&pdpc(&["bogus"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "b.txt", "not an instance\n");
    assert_eq!(code(&pdpc(&["solve", &bad])), 2);
}

#[test]
fn enum_counts_and_caps() {
    let o = pdpc(&["enum", "--completions", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("completions 2: 3"));
    assert_eq!(code(&pdpc(&["enum", "--completions", "9"])), 3);
}

#[test]
fn caps_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // four pairs is beyond the supported k
    let inst = write(
        dir.path(),
        "i.txt",
        "pdpc-instance v1\nn 8\npair 0 1\npair 2 3\npair 4 5\npair 6 7\nhole 0 1 2 3 4 5 6 7\nell 4\n",
    );
    assert_eq!(code(&pdpc(&["solve", &inst])), 3);
    // eleven boundary vertices is beyond the oracle
    let big = write(dir.path(), "b.txt", "pdpc-instance v1\nn 11\npair 0 5\nhole 0 1 2 3 4 5 6 7 8 9 10\nell 1\n");
    assert_eq!(code(&pdpc(&["solve", &big, "--oracle"])), 3);
}
