use std::fs;

use unravel_core::bounds::BoundName;
use unravel_core::generators::{Family, GenSpec};
use unravel_core::harness::{
    expand_corpus_paths, read_reports, run_verify, write_generated, write_outputs, CorpusEntry,
    RunConfig, RunSummary, SCHEMA_VERSION,
};

fn specs() -> Vec<GenSpec> {
    vec![
        GenSpec::new(Family::Cycle { n: 10 }, 0),
        GenSpec::new(Family::CompleteBipartite { a: 3, b: 4 }, 0),
        GenSpec::new(Family::RandomRegular { n: 30, d: 3 }, 5),
    ]
}

#[test]
fn files_and_specs_give_the_same_reports() {
    let dir = tempfile::tempdir().unwrap();
    for spec in specs() {
        write_generated(dir.path(), &spec).unwrap();
    }
    let list = dir.path().join("specs.json");
    fs::write(&list, serde_json::to_string(&specs()).unwrap()).unwrap();

    let from_files = expand_corpus_paths(&[dir.path().to_path_buf()]).unwrap();
    let from_specs = expand_corpus_paths(&[list]).unwrap();
    assert_eq!(from_files.len(), 3);
    assert!(from_specs.iter().all(|e| matches!(e, CorpusEntry::Spec(_))));

    let run = |corpus| {
        let mut cfg = RunConfig::new(corpus);
        cfg.radii = vec![1, 2];
        cfg.threads = Some(1);
        run_verify(&cfg).unwrap()
    };
    let a = run(from_files);
    let b = run(from_specs);
    assert_eq!(a.reports, b.reports);
    assert_eq!(a.reports.len(), 3 * 2 * BoundName::ALL.len());
    assert_eq!(a.exit_code(), 0);
}

#[test]
fn outputs_round_trip() {
    let mut corpus: Vec<CorpusEntry> = specs().into_iter().map(CorpusEntry::Spec).collect();
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.edges");
    fs::write(&broken, "0 0\n").unwrap();
    corpus.push(CorpusEntry::File(broken));

    let mut cfg = RunConfig::new(corpus);
    cfg.threads = Some(2);
    let outcome = run_verify(&cfg).unwrap();
    let out = dir.path().join("out");
    write_outputs(&out, &outcome).unwrap();

    assert_eq!(
        read_reports(&out.join("reports.json")).unwrap(),
        outcome.reports
    );
    let summary: RunSummary =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary.schema_version, SCHEMA_VERSION);
    assert_eq!(summary.graphs, 3);
    assert_eq!(summary.load_errors.len(), 1);
    assert_eq!(summary.evaluated, outcome.reports.len());

    let mut csv = csv::Reader::from_path(out.join("reports.csv")).unwrap();
    let headers = csv.headers().unwrap().clone();
    for column in [
        "graph_id",
        "bound",
        "r",
        "lhs",
        "rhs",
        "slack",
        "hypothesis_ok",
        "pass",
    ] {
        assert!(
            headers.iter().any(|h| h == column),
            "missing column {column}"
        );
    }
    assert_eq!(csv.records().count(), outcome.reports.len());
    assert!(fs::read_to_string(out.join("hoory_context.csv"))
        .unwrap()
        .contains("illustrative"));
}

#[test]
fn regular_cycle_reports_match_closed_forms() {
    let mut cfg = RunConfig::new(vec![CorpusEntry::Spec(GenSpec::new(
        Family::Cycle { n: 10 },
        0,
    ))]);
    cfg.radii = vec![3];
    let outcome = run_verify(&cfg).unwrap();
    let find = |bound| outcome.reports.iter().find(|r| r.bound == bound).unwrap();
    let theorem1 = find(BoundName::Theorem1);
    assert!((theorem1.rhs.unwrap() - 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
    let lb2 = find(BoundName::CorollaryLb2);
    assert!((lb2.lhs.unwrap() - 2.0).abs() < 1e-12);
    assert!((lb2.rhs.unwrap() - 2.0).abs() < 1e-12);
    assert!(outcome.reports.iter().all(|r| !r.is_violation()));
}
