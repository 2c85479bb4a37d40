use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gerrymander::evaluate_partition;
use gerrymander::io::{parse_instance, parse_partition};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerrymander"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn figure1_is_not_a_tree_but_its_partition_wins() {
    let inst = data("fig1.inst");
    let out = run(&["solve", path_str(&inst)]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    let out = run(&["eval", path_str(&inst), path_str(&data("fig1.part"))]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("solution true"));
    assert!(text.contains("uniquely black 2"));
}

#[test]
fn eval_reports_a_losing_partition_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let part = dir.path().join("lose.part");
    std::fs::write(&part, "0 1 2 3\n4 5\n").unwrap();
    let out = run(&["eval", path_str(&data("fig1.inst")), path_str(&part)]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("solution false"));
}

#[test]
fn partition_tree_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pt.inst");
    let part = dir.path().join("pt.part");
    let out = run(&[
        "gen",
        "partition-tree",
        "--elements",
        "2,2",
        "--witness-indices",
        "1",
        "--output",
        path_str(&inst),
        "--witness-out",
        path_str(&part),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&run(&["eval", path_str(&inst), path_str(&part)])), 0);

    let out = run(&[
        "solve",
        path_str(&inst),
        "--algorithm",
        "brute",
        "--witness",
        path_str(&part),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("answer yes"));
    let i = parse_instance(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let p = parse_partition(&std::fs::read_to_string(&part).unwrap()).unwrap();
    assert!(evaluate_partition(&i, &p).is_solution);
}

#[test]
fn partition_tree_without_half_sum_has_no_solution() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pt.inst");
    let out = run(&[
        "gen",
        "partition-tree",
        "--elements",
        "1,3",
        "--output",
        path_str(&inst),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["solve", path_str(&inst)]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("answer no"));
}

#[test]
fn clique_path_to_stdout_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let part = dir.path().join("k3.part");
    let out = run(&[
        "gen",
        "clique-path",
        "--graph",
        path_str(&data("k3.graph")),
        "--l",
        "3",
        "--witness-clique",
        "0,1,2",
        "--witness-out",
        path_str(&part),
    ]);
    assert_eq!(code(&out), 0);
    let inst = parse_instance(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let p = parse_partition(&std::fs::read_to_string(&part).unwrap()).unwrap();
    assert!(evaluate_partition(&inst, &p).is_solution);
}

#[test]
fn usage_and_capacity_errors() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["solve"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["solve", "/nonexistent/file.inst"])), 1);
    assert_eq!(
        code(&run(&["solve", path_str(&data("fig1.inst")), "--algorithm", "fast"])),
        1
    );
    // Witness requested without a place to put it.
    let out = run(&["gen", "partition-tree", "--elements", "2,2", "--witness-indices", "1"]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    // C5 is not a clique source for l = 3.
    let out = run(&[
        "gen",
        "clique-path",
        "--graph",
        path_str(&data("c5.graph")),
        "--l",
        "3",
        "--witness-clique",
        "0,1,2",
    ]);
    assert_ne!(code(&out), 0);
}

#[test]
fn disconnected_instances_are_rejected_by_solve() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("c5.inst");
    let out = run(&[
        "gen",
        "clique-path",
        "--graph",
        path_str(&data("c5.graph")),
        "--l",
        "2",
        "--output",
        path_str(&inst),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["solve", path_str(&inst)])), 2);
}

#[test]
fn crosscheck_is_clean() {
    let out = run(&[
        "crosscheck",
        "--n",
        "8",
        "--colors",
        "3",
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("discrepancies 0"));
    assert_eq!(code(&run(&["crosscheck", "--n", "0"])), 1);
}
