use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qproj::decide::{decide, GeometryMode, Reason};
use qproj::format::parse_structure;
use tempfile::TempDir;

fn qproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qproj")).args(args).env_remove("QPROJ_JOBS").output().expect("run qproj")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN4: &str = "kind poset\nn 4\nle 0 1\nle 1 2\nle 2 3\nle 0 2\nle 0 3\nle 1 3\n";
const PATH3: &str = "kind graph\nn 3\nedge 0 1\nedge 1 2\n";
const V_POSET: &str = "kind poset\nn 3\nle 0 1\nle 0 2\n";
const K3: &str = "kind graph\nn 3\nedge 0 1\nedge 0 2\nedge 1 2\n";

#[test]
fn decide_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "chain.txt", CHAIN4);
    let o = qproj(&["decide", arg(&chain)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "verdict QP Chain\n");

    let path = write(&dir, "path.txt", PATH3);
    let o = qproj(&["decide", arg(&path)]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o).lines().next(), Some("verdict NOT_QP NotCharacterized"));
}

#[test]
fn malformed_and_invalid_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "kind poset\nn 3\nle 0 9\n");
    let o = qproj(&["decide", arg(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let intransitive = write(&dir, "intransitive.txt", "kind poset\nn 3\nle 0 1\nle 1 2\n");
    let o = qproj(&["decide", arg(&intransitive)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("transitivity"));

    let o = qproj(&["decide", "/nonexistent/structure.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(qproj(&[]).status.code(), Some(1));
    assert_eq!(qproj(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qproj(&["decide", "x", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(qproj(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_reports() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.txt", V_POSET);
    let o = qproj(&["oracle", arg(&v)]);
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    assert!(out.starts_with("verdict NOT_QP\ntargets_examined "), "{out}");
    let target = out.split("# target\n").nth(1).and_then(|rest| rest.split("# f\n").next()).unwrap();
    let target = parse_structure(target).unwrap();
    assert_eq!(decide(&target, GeometryMode::Strict).unwrap().reason, Reason::Chain, "{out}");
    assert_eq!(target.len(), 3);

    let perm = write(&dir, "perm.txt", "kind permutation\nn 2\nperm 1 0\n");
    let o = qproj(&["oracle", arg(&perm)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verdict QP\n"));

    let k3 = write(&dir, "k3.txt", K3);
    assert_eq!(qproj(&["oracle", arg(&k3)]).status.code(), Some(0));
    assert_eq!(qproj(&["oracle", arg(&k3), "--max-target-size", "4"]).status.code(), Some(2));
}

#[test]
fn oracle_output_does_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "path.txt", "kind graph\nn 4\nedge 0 1\nedge 1 2\nedge 2 3\n");
    let one = qproj(&["oracle", arg(&path), "--jobs", "1"]);
    let eight = qproj(&["oracle", arg(&path), "--jobs", "8"]);
    assert_eq!(one.stdout, eight.stdout);
    let env =
        Command::new(env!("CARGO_BIN_EXE_qproj")).args(["oracle", arg(&path)]).env("QPROJ_JOBS", "3").output().unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn bound_exceeded_exits_3() {
    assert_eq!(qproj(&["enumerate", "--kind", "digraph-loops", "--n", "9"]).status.code(), Some(3));
    assert_eq!(qproj(&["verify", "--kind", "poset", "--n-max", "12"]).status.code(), Some(3));
}

#[test]
fn enumerate_prints_blank_separated_blocks() {
    let o = qproj(&["enumerate", "--kind", "graph", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let blocks: Vec<&str> = out.split("\n\n").collect();
    assert_eq!(blocks.len(), 11);
    assert!(blocks.iter().all(|b| b.starts_with("kind graph\nn 4")));
}

#[test]
fn verify_small_posets() {
    let o = qproj(&["verify", "--kind", "poset", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK 24 classes\n");
}

#[test]
fn witness_fed_back_to_lift_has_no_lift() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("v.txt", V_POSET),
        ("path.txt", PATH3),
        ("loops.txt", "kind graph-loops\nn 3\nedge 0 0\nedge 0 1\nedge 1 1\nedge 1 2\n"),
        ("hyper.txt", "kind hypergraph\nn 4\nhedge 0 1 2\n"),
        ("geo.txt", "kind geometry\nn 4\nline 0 1 2\n"),
    ];
    for (name, text) in cases {
        let source = write(&dir, name, text);
        let out = dir.path().join(format!("{name}.witness"));
        let o = qproj(&["witness", arg(&source), "--out-dir", arg(&out)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("# target\n"));
        let lift = qproj(&[
            "lift",
            arg(&source),
            arg(&out.join("target.txt")),
            arg(&out.join("f.map")),
            arg(&out.join("j.map")),
        ]);
        assert_eq!(lift.status.code(), Some(10), "{name}");
        assert_eq!(stdout(&lift), "no-lift\n");
    }
}

#[test]
fn witness_of_a_qp_structure_is_a_precondition_error() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "chain.txt", CHAIN4);
    assert_eq!(qproj(&["witness", arg(&chain)]).status.code(), Some(2));
}

#[test]
fn lift_on_k3_inverts_a_rotation() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.txt", K3);
    let f = write(&dir, "f.map", "map 0 1 2\n");
    let j = write(&dir, "j.map", "map 1 2 0\n");
    for extra in [None, Some("--construct")] {
        let mut args = vec!["lift", arg(&k3), arg(&k3), arg(&f), arg(&j)];
        args.extend(extra);
        let o = qproj(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "map 2 0 1\n");
    }
    let not_epi = write(&dir, "c.map", "map 0 0 1\n");
    assert_eq!(qproj(&["lift", arg(&k3), arg(&k3), arg(&f), arg(&not_epi)]).status.code(), Some(2));
}
