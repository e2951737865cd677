//! The installed binary, driven end to end through temporary files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const GOLDEN_LP: &str = include_str!("fixtures/paradox_simple.lp");
const EXAMPLE_FILE: &str = include_str!("fixtures/paradox_simple.txt");

fn iflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iflow"))
        .args(args)
        .env_remove("IFLOW_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
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
fn worst_on_the_simple_example() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let o = iflow(&["worst", s(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("c_w = 12\n"));
    let o = iflow(&["--quiet", "worst", s(&inst), "--flow-amount", "2"]);
    assert_eq!(stdout(&o), "c_w = 4\n");
}

#[test]
fn sp_method_rejects_a_bridge() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let o = iflow(&["worst", s(&inst), "--method", "sp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NOT SERIES-PARALLEL"));
}

#[test]
fn sp_method_agrees_with_brute_force() {
    let dir = TempDir::new().unwrap();
    for seed in 0..10 {
        let seed = seed.to_string();
        let inst = dir.path().join(format!("sp{seed}.txt"));
        let o = iflow(&[
            "gen",
            "random",
            "--series-parallel",
            "--arcs",
            "6",
            "--cap-hi",
            "2",
            "--flow",
            "1",
            "--seed",
            &seed,
            "-o",
            s(&inst),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let brute = iflow(&["-q", "worst", s(&inst)]);
        let sp = iflow(&["-q", "worst", s(&inst), "--method", "sp"]);
        assert_eq!(stdout(&brute), stdout(&sp), "seed {seed}");
        assert_eq!(brute.status.code(), sp.status.code());
    }
}

#[test]
fn emit_milp_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let lp = dir.path().join("ex.lp");
    let o = iflow(&["emit-milp", s(&inst), "-o", s(&lp)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&lp).unwrap(), GOLDEN_LP);
}

#[test]
fn worst_then_certify_then_extremalize() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("chain.txt");
    assert_eq!(
        iflow(&["gen", "chain", "--n", "6", "-o", s(&inst)]).status.code(),
        Some(0)
    );
    let (u, x, pi) = (dir.path().join("u"), dir.path().join("x"), dir.path().join("pi"));
    let o = iflow(&[
        "worst",
        s(&inst),
        "--scenario-out",
        s(&u),
        "--flow-out",
        s(&x),
        "--pi-out",
        s(&pi),
    ]);
    assert!(stdout(&o).starts_with("c_w = 33\n"));
    let o = iflow(&[
        "certify",
        s(&inst),
        "--scenario",
        s(&u),
        "--flow",
        s(&x),
        "--pi",
        s(&pi),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("CERTIFIED"));
    let o = iflow(&[
        "-q",
        "extremalize",
        s(&inst),
        "--scenario",
        s(&u),
        "--flow",
        s(&x),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("cost = 33\ninterior arcs (5): "), "{text}");
}

#[test]
fn certify_rejects_wrong_potentials() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let (u, x, pi) = (dir.path().join("u"), dir.path().join("x"), dir.path().join("pi"));
    iflow(&["worst", s(&inst), "--scenario-out", s(&u), "--flow-out", s(&x)]);
    fs::write(&pi, "q iflow 4\nv 1 0\nv 2 0\nv 3 0\nv 4 0\n").unwrap();
    let o = iflow(&[
        "certify",
        s(&inst),
        "--scenario",
        s(&u),
        "--flow",
        s(&x),
        "--pi",
        s(&pi),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NOT CERTIFIED"));
}

#[test]
fn solve_reports_infeasible_scenarios() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let u = write(&dir, "u", "s iflow 5\nu 0 1\nu 1 1\nu 2 1\nu 3 0\nu 4 0\n");
    let o = iflow(&[
        "-q",
        "solve",
        s(&inst),
        "--scenario",
        s(&u),
        "--flow-amount-is-fixed",
    ]);
    assert_eq!(o.status.code(), Some(2), "unknown flags are usage errors");
    let o = iflow(&["-q", "solve", s(&inst), "--scenario", s(&u)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "cost = 12\n".into()));
    let inst2 = write(
        &dir,
        "ex2.txt",
        &EXAMPLE_FILE.replace("p iflow 4 5 1", "p iflow 4 5 2"),
    );
    let o = iflow(&["-q", "solve", s(&inst2), "--scenario", s(&u)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "INFEASIBLE\n".into()));
}

#[test]
fn paradox_and_immunity() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let o = iflow(&["paradox", s(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PARADOX at f = 1: c_w 12 -> 4"), "{text}");
    assert!(text.contains("(cost -8)"), "{text}");

    let flat = write(&dir, "flat", "0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n");
    let o = iflow(&["-q", "immune", "--complete", "4", "--costs", s(&flat)]);
    assert_eq!(stdout(&o), "IMMUNE\n");
    let skew = write(&dir, "skew", "0 9 1 9\n9 0 9 1\n9 9 0 9\n9 9 9 0\n");
    let o = iflow(&["-q", "immune", "--complete", "4", "--costs", s(&skew)]);
    assert_eq!(stdout(&o), "NOT-IMMUNE\n");
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "ex.txt", EXAMPLE_FILE);
    let o = Command::new(env!("CARGO_BIN_EXE_iflow"))
        .args(["worst", s(&inst)])
        .env("IFLOW_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_iflow"))
        .args(["worst", s(&inst)])
        .env("IFLOW_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "p iflow 2 1 1\nn 1 s\nn 2 t\na 1 2 3 1 0\n");
    let o = iflow(&["worst", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}
