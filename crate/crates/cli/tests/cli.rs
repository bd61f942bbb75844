use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn unravel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unravel"))
        .args(args)
        .env("UNRAVEL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_cycle_writes_one_line_per_edge() {
    let dir = tempfile::tempdir().unwrap();
    let out = unravel(&["gen", "cycle", "--n", "50", "--out", path_str(dir.path())]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("cycle-n50-s0.edges")).unwrap();
    assert_eq!(text.lines().count(), 50);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cycle-n50-s0.json")).unwrap())
            .unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["edge_count"], 50);
}

#[test]
fn gen_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = unravel(&[
            "gen",
            "random-regular",
            "--n",
            "100",
            "--d",
            "3",
            "--seed",
            "7",
            "--out",
            path_str(dir.path()),
        ]);
        assert!(out.status.success());
    }
    let name = "random-regular-n100-d3-s7.edges";
    let first = fs::read(a.path().join(name)).unwrap();
    assert_eq!(first, fs::read(b.path().join(name)).unwrap());
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 150);
}

#[test]
fn gen_random_tree_is_a_spanning_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = unravel(&[
        "gen",
        "random-tree",
        "--n",
        "30",
        "--seed",
        "1",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("random-tree-n30-s1.edges")).unwrap();
    let graph = unravel_core::graph::parse_edge_list(&text).unwrap();
    assert_eq!(graph.vertex_count(), 30);
    assert_eq!(graph.edge_count(), 29);
    assert_eq!(unravel_core::graph::connected_components(&graph).len(), 1);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = unravel(&[
        "gen",
        "random-regular",
        "--n",
        "7",
        "--d",
        "3",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = unravel(&["gen", "hypercube", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

fn write_corpus(dir: &Path) {
    for (family, extra) in [
        ("cycle", vec!["--n", "9"]),
        ("complete", vec!["--n", "5"]),
        ("petersen", vec![]),
    ] {
        let mut args = vec!["gen", family];
        args.extend(extra);
        args.extend(["--out", path_str(dir)]);
        assert!(unravel(&args).status.success());
    }
}

#[test]
fn verify_is_byte_identical_across_runs_and_thread_counts() {
    let corpus = tempfile::tempdir().unwrap();
    write_corpus(corpus.path());
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |out: &Path, threads: &str| {
        unravel(&[
            "verify",
            "--corpus",
            path_str(corpus.path()),
            "--r",
            "1,2",
            "--threads",
            threads,
            "--out",
            path_str(out),
        ])
    };
    let first = run(a.path(), "1");
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(run(b.path(), "3").status.code(), Some(0));
    for name in ["reports.json", "reports.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap()
        );
    }
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("reports.json")).unwrap()).unwrap();
    assert_eq!(reports["schema_version"], 1);
    // Three graphs, two radii, nine checks each.
    assert_eq!(reports["reports"].as_array().unwrap().len(), 3 * 2 * 9);
    let k5_theorem8 = reports["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["graph_id"] == "complete-n5-s0" && r["bound"] == "theorem8" && r["r"] == 2)
        .unwrap();
    assert_eq!(k5_theorem8["hypothesis_ok"], false);
}

#[test]
fn corrupt_file_is_reported_and_the_batch_continues() {
    let corpus = tempfile::tempdir().unwrap();
    write_corpus(corpus.path());
    fs::write(corpus.path().join("broken.edges"), "0 1\n1 two\n").unwrap();
    let out = tempfile::tempdir().unwrap();
    let result = unravel(&[
        "verify",
        "--corpus",
        path_str(corpus.path()),
        "--r",
        "1",
        "--out",
        path_str(out.path()),
    ]);
    assert_eq!(result.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&result.stderr).contains("broken.edges"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["graphs"], 3);
    assert_eq!(summary["load_errors"].as_array().unwrap().len(), 1);
    assert!(out.path().join("summary.csv").exists());
    assert!(out.path().join("hoory_context.csv").exists());
}

#[test]
fn report_reads_back_a_run() {
    let corpus = tempfile::tempdir().unwrap();
    write_corpus(corpus.path());
    let out = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--corpus",
        path_str(corpus.path()),
        "--r",
        "1",
        "--out",
        path_str(out.path()),
    ];
    assert!(unravel(&args).status.success());
    let report = unravel(&["report", "--out", path_str(out.path())]);
    assert_eq!(report.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&report.stdout).contains("theorem1"));
    let missing = tempfile::tempdir().unwrap();
    assert_eq!(
        unravel(&["report", "--out", path_str(missing.path())])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_rejects_zero_radius() {
    let out = tempfile::tempdir().unwrap();
    let result = unravel(&["verify", "--r", "0", "--out", path_str(out.path())]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn converge_on_the_petersen_graph() {
    let out = unravel(&["converge", "--family", "petersen", "--k", "60"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("k,s_2k,estimate,gap"));
    assert_eq!(stdout.lines().filter(|l| !l.starts_with('#')).count(), 31);
}

#[test]
fn cover_on_a_cycle_file() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        unravel(&["gen", "cycle", "--n", "40", "--out", path_str(dir.path())])
            .status
            .success()
    );
    let graph = dir.path().join("cycle-n40-s0.edges");
    let out = unravel(&[
        "cover",
        "--graph",
        path_str(&graph),
        "--r-max",
        "5",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let table: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("cover-cycle-n40-s0.json")).unwrap(),
    )
    .unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let r3 = rows[2]["lower"].as_f64().unwrap();
    assert!((r3 - 2.0 * (std::f64::consts::PI / 8.0).cos()).abs() < 1e-9);
}
