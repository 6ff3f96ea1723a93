use std::path::Path;
use std::process::{Command, Output};

use kelayer::experiment::read_csv;
use kelayer::graph::Graph;
use tempfile::TempDir;

fn kelayer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kelayer")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, g: &Graph) -> String {
    let path = dir.path().join(name);
    g.write_to_path(&path).unwrap();
    path.to_str().unwrap().to_string()
}

fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

#[test]
fn verify_c4() {
    let dir = TempDir::new().unwrap();
    let out = kelayer(&["verify", &fixture(&dir, "c4.txt", &cycle(4))]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("KE: yes"), "{text}");
    assert!(text.contains("matching: 2"));
    assert!(text.contains("cover: 2"));
}

#[test]
fn verify_c5_is_not_ke() {
    let dir = TempDir::new().unwrap();
    let out = kelayer(&["verify", "--format", "json", &fixture(&dir, "c5.txt", &cycle(5))]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["ke"], false);
    assert_eq!(value["matching"], 2);
}

#[test]
fn decompose_c3() {
    let dir = TempDir::new().unwrap();
    let c3 = fixture(&dir, "c3.txt", &cycle(3));
    let out = kelayer(&["decompose", "--strategy", "2", "--energy", "matching", &c3]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("layers: 2"), "{text}");
    assert!(text.contains("cover: 2"));

    let out = kelayer(&["decompose", "--format", "json", &c3]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["layer_count"], 2);
    assert_eq!(value["mvc_estimate"], 2);
}

#[test]
fn oracle_c5() {
    let dir = TempDir::new().unwrap();
    let c5 = fixture(&dir, "c5.txt", &cycle(5));
    let text = stdout(&kelayer(&["oracle", &c5]));
    assert!(text.starts_with("mvc: 3"), "{text}");
    let text = stdout(&kelayer(&["oracle", "--all", "10", &c5]));
    assert!(text.contains("minimum covers: 5"), "{text}");
    let out = kelayer(&["oracle", "--budget", "4", &c5]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_writes_a_readable_graph() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.txt");
    let out = kelayer(&["generate", "--n", "50", "--degree", "3", "--seed", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let g = Graph::read_from_path(&path).unwrap();
    assert_eq!(g.node_count(), 50);
    let again = stdout(&kelayer(&["generate", "--n", "50", "--degree", "3", "--seed", "4"]));
    assert_eq!(again, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn sweep_csv_parses_back() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = kelayer(&[
        "sweep", "--n", "80", "--from", "1", "--to", "3", "--step", "1", "--samples", "3", "--seed", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let records = read_csv(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(records.len(), 9);
    assert!(records.iter().all(|r| r.wall_time_s.is_none()));

    let text = stdout(&kelayer(&[
        "sweep", "--n", "80", "--from", "1", "--to", "3", "--step", "1", "--samples", "3", "--seed", "2",
        "--format", "text",
    ]));
    assert!(text.contains("peak degree:"), "{text}");
}

#[test]
fn compare_and_gaps_run() {
    let text = stdout(&kelayer(&["compare", "--n", "60", "--from", "2", "--to", "3", "--samples", "2", "--format", "csv"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "avg_degree,strategy,energy,mean_ratio,lower_bound_ratio");
    assert_eq!(lines.len(), 1 + 3 * 6);

    let text = stdout(&kelayer(&["gaps", "--n", "40", "--degrees", "2,3", "--samples", "3"]));
    assert_eq!(text.lines().count(), 3, "{text}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(kelayer(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(kelayer(&[]).status.code(), Some(1));
    assert_eq!(kelayer(&["decompose", "x", "--strategy", "7"]).status.code(), Some(1));
    assert_eq!(kelayer(&["decompose", "x", "--threshold", "2"]).status.code(), Some(1));
    assert_eq!(kelayer(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_2() {
    let missing = Path::new("/definitely/not/here.txt");
    assert_eq!(kelayer(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n").unwrap();
    let out = kelayer(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
