//! End-to-end tests of the `biclique` binary: output contracts, exit codes,
//! and the index/reduce file formats.

use biclique_core::{oracle, write_plain_edge_list};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biclique"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("figure1.edges");
    let mut buf = Vec::new();
    write_plain_edge_list(&oracle::figure1(), &mut buf).unwrap();
    std::fs::write(&path, buf).unwrap();
    path
}

#[test]
fn count_fixture_reports_ten_for_every_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    for strategy in ["node-split", "edge-split", "estimator", "estimator-index"] {
        let out = run(&[
            "count",
            "--input",
            input.to_str().unwrap(),
            "--p",
            "3",
            "--q",
            "3",
            "--strategy",
            strategy,
        ]);
        let json = stdout_json(&out);
        assert_eq!(json["count"], "10", "strategy {strategy}");
        assert_eq!(json["strategy"], strategy);
        assert_eq!(json["graph"]["edge_count"], 19);
        // Conservation: the two tallies reproduce the count.
        let comb: u64 = json["metrics"]["combinatorial"]
            .as_str()
            .unwrap()
            .parse()
            .unwrap();
        let hold: u64 = json["metrics"]["at_hold_limit"]
            .as_str()
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(comb + hold, 10);
    }
}

#[test]
fn plain_output_is_the_count_alone() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&[
        "count",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--plain",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "10\n");
}

#[test]
fn stdin_dash_convention() {
    use std::io::Write as _;
    let mut child = bin()
        .args(["count", "--input", "-", "--p", "2", "--q", "2", "--plain"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"0 0\n0 1\n1 0\n1 1\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1\n");
}

#[test]
fn konect_format_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.konect");
    std::fs::write(&path, "% comment line\n1 1 1 100\n1 2 1 101\n2 1\n2 2\n").unwrap();
    let out = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "konect",
        "--p",
        "2",
        "--q",
        "2",
        "--plain",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1\n");
}

#[test]
fn argument_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&[
        "count",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "0",
        "--q",
        "3",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(!out.stderr.is_empty());

    let out = run(&[
        "range",
        "--input",
        input.to_str().unwrap(),
        "--p-min",
        "3",
        "--p-max",
        "2",
        "--q-min",
        "1",
        "--q-max",
        "1",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn parse_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.edges");
    std::fs::write(&path, "0 0\nnot numbers\n").unwrap();
    let out = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--p",
        "2",
        "--q",
        "2",
    ]);
    assert_eq!(exit_code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run(&[
        "count",
        "--input",
        dir.path().join("missing.edges").to_str().unwrap(),
        "--p",
        "2",
        "--q",
        "2",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn depth_cap_env_var_exits_4() {
    // A 6-cycle forces at least one recursion step below the top level.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.edges");
    std::fs::write(&path, "0 0\n0 1\n1 1\n1 2\n2 2\n2 0\n").unwrap();
    let out = bin()
        .args([
            "count",
            "--input",
            path.to_str().unwrap(),
            "--p",
            "2",
            "--q",
            "2",
            "--strategy",
            "node-split",
        ])
        .env("BICLIQUE_MAX_DEPTH", "0")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 4);

    let out = bin()
        .args([
            "count",
            "--input",
            path.to_str().unwrap(),
            "--p",
            "2",
            "--q",
            "2",
            "--plain",
        ])
        .env("BICLIQUE_MAX_DEPTH", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn threads_give_byte_identical_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rand.edges");
    let mut buf = Vec::new();
    write_plain_edge_list(&oracle::random_bipartite(14, 13, 0.5, 404), &mut buf).unwrap();
    std::fs::write(&path, buf).unwrap();
    let mut counts = Vec::new();
    for threads in ["1", "3", "7"] {
        let out = run(&[
            "count",
            "--input",
            path.to_str().unwrap(),
            "--p",
            "3",
            "--q",
            "2",
            "--threads",
            threads,
        ]);
        let json = stdout_json(&out);
        counts.push(json["count"].as_str().unwrap().to_string());
    }
    assert_eq!(counts[0], counts[1]);
    assert_eq!(counts[0], counts[2]);
}

#[test]
fn local_reports_sums_and_top_k() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&[
        "local",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["sum_u"], "30");
    assert_eq!(json["sum_v"], "30");
    assert_eq!(json["total"], "10");
    assert_eq!(json["identities_ok"], true);
    assert_eq!(json["u_counts"].as_array().unwrap().len(), 5);
    // Per-node values at their original ids.
    let v_counts = json["v_counts"].as_array().unwrap();
    let v0 = v_counts.iter().find(|e| e["id"] == 0).unwrap();
    assert_eq!(v0["count"], "0");

    let out = run(&[
        "local",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--top",
        "2",
    ]);
    let json = stdout_json(&out);
    let u_top = json["u_counts"].as_array().unwrap();
    assert_eq!(u_top.len(), 2);
    assert_eq!(u_top[0]["count"], "8");
}

#[test]
fn range_matrix_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&[
        "range",
        "--input",
        input.to_str().unwrap(),
        "--p-min",
        "3",
        "--p-max",
        "3",
        "--q-min",
        "3",
        "--q-max",
        "3",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["cells"][0][0], "10");

    // Every cell of a wider rectangle equals an independent single count.
    let out = run(&[
        "range",
        "--input",
        input.to_str().unwrap(),
        "--p-min",
        "2",
        "--p-max",
        "4",
        "--q-min",
        "2",
        "--q-max",
        "4",
    ]);
    let json = stdout_json(&out);
    for (pi, p) in (2..=4).enumerate() {
        for (qi, q) in (2..=4).enumerate() {
            let single = run(&[
                "count",
                "--input",
                input.to_str().unwrap(),
                "--p",
                &p.to_string(),
                "--q",
                &q.to_string(),
                "--plain",
            ]);
            let want = String::from_utf8_lossy(&single.stdout).trim().to_string();
            assert_eq!(json["cells"][pi][qi].as_str().unwrap(), want, "cell ({p},{q})");
        }
    }
}

#[test]
fn index_round_trip_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let index_path = dir.path().join("fig1.idx.json");
    let out = run(&[
        "index",
        "--input",
        input.to_str().unwrap(),
        "--x",
        "3",
        "--y",
        "3",
        "--out",
        index_path.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["u_count"], 5);
    assert!(index_path.exists());

    // Counting with the index gives the same answer.
    let out = run(&[
        "count",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--index",
        index_path.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["count"], "10");
    assert_eq!(json["strategy"], "estimator-index");
    assert!(json["index_load_ms"].is_number());

    // A different graph is refused with an argument error.
    let other = dir.path().join("other.edges");
    let mut buf = Vec::new();
    write_plain_edge_list(&biclique_core::BipartiteGraph::complete(5, 5), &mut buf).unwrap();
    std::fs::write(&other, buf).unwrap();
    let out = run(&[
        "count",
        "--input",
        other.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--index",
        index_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("different graph"));
}

#[test]
fn stats_and_reduce_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["stats", "--input", input.to_str().unwrap()]);
    let json = stdout_json(&out);
    assert_eq!(json["graph"]["edge_count"], 19);
    assert_eq!(json["graph"]["u_count"], 5);

    // Reducing the fixture at (3,3) drops v0 and its edge.
    let reduced_path = dir.path().join("reduced.edges");
    let out = run(&[
        "reduce",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--out",
        reduced_path.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["reduced"]["edge_count"], 18);
    assert_eq!(json["removed_v"], 1);

    // Reduction is idempotent at the file level.
    let twice_path = dir.path().join("twice.edges");
    let out = run(&[
        "reduce",
        "--input",
        reduced_path.to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "3",
        "--out",
        twice_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&reduced_path).unwrap(),
        std::fs::read_to_string(&twice_path).unwrap()
    );

    // A star collapses to an empty graph at (2,2).
    let star = dir.path().join("star.edges");
    std::fs::write(&star, "0 0\n0 1\n0 2\n0 3\n0 4\n").unwrap();
    let empty_path = dir.path().join("empty.edges");
    let out = run(&[
        "reduce",
        "--input",
        star.to_str().unwrap(),
        "--p",
        "2",
        "--q",
        "2",
        "--out",
        empty_path.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["reduced"]["edge_count"], 0);
    assert_eq!(std::fs::read_to_string(&empty_path).unwrap(), "");
}
