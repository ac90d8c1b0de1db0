use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const INSTANCE_A: &str = "corridor 1\ntile T0 white white white white\ntile T1 white white white white\ninitial T0\n";
const INSTANCE_B: &str = "corridor 1\ntile T0 white white white white\ntile T1 black white white white\ninitial T0\n";

fn corridor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corridor")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_reports_winner_and_rank() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", INSTANCE_A);
    let out = corridor(&["solve", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("winner: Eloise, rank: 1"), "{}", stdout(&out));
    let b = write(&dir, "b.txt", INSTANCE_B);
    let out = corridor(&["solve", s(&b)]);
    assert!(stdout(&out).contains("winner: Abelard"), "{}", stdout(&out));
}

#[test]
fn compile_model_check_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut verdicts = Vec::new();
    for (name, text) in [("a", INSTANCE_A), ("b", INSTANCE_B)] {
        let inst = write(&dir, &format!("{name}.txt"), text);
        let formula = dir.path().join(format!("{name}.phi"));
        let model = dir.path().join(format!("{name}.model"));
        assert_eq!(corridor(&["compile", s(&inst), "-o", s(&formula)]).status.code(), Some(0));
        let body = fs::read_to_string(&formula).unwrap();
        assert!(body.contains("# size=") && body.contains("# props=") && body.contains("# b=3 N=4 L=3"), "{body}");
        assert_eq!(corridor(&["model", s(&inst), "-o", s(&model)]).status.code(), Some(0));
        assert!(fs::read_to_string(&model).unwrap().starts_with("# root n0\n"));
        let out = corridor(&["check", s(&formula), s(&model), "-p", "n0"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        verdicts.push(stdout(&out).trim().to_string());
    }
    assert_eq!(verdicts, ["n0: true", "n0: false"]);
}

#[test]
fn compile_to_stdout() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", INSTANCE_A);
    let out = corridor(&["compile", s(&a), "--strict-abelard"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# size="));
}

#[test]
fn e2e_agrees_on_small_family() {
    let out = corridor(&["e2e", "--family", "n<=2,s=0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("family: n in {1|2}, s in {0} (72 instances)"), "{text}");
    assert!(text.lines().any(|l| l == "agreements: 100%"), "{text}");
}

#[test]
fn e2e_unguarded_condition_disagrees() {
    let out = corridor(&["e2e", "--family", "n=2,s=0", "--unguarded-abelard", "-q"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stdout(&out).contains("agreements: 100%"));
}

#[test]
fn geometry_commands() {
    let out = corridor(&["geometry", "verify", "--depth", "3", "--mode", "closed"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("mode closed: pairs checked: 105, mismatches: 0"), "{text}");
    assert!(text.contains("certificates:") && !text.contains("FAILED"));
    let out = corridor(&["geometry", "lemma", "--trials", "300", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trials: 300, violations: 0"));
}

#[test]
fn scripted_play() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", INSTANCE_A);
    let mut child = Command::new(env!("CARGO_BIN_EXE_corridor"))
        .args(["play", s(&a)])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"nonsense\nT1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("`nonsense` is not a legal move"), "{text}");
    assert!(text.contains("Eloise wins"), "{text}");
}

#[test]
fn missing_file_is_an_error() {
    let out = corridor(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
