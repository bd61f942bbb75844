//! Corpus construction, verification sweeps and report output.
//!
//! A run loads every corpus entry, evaluates all bound checks for every
//! radius, and writes `reports.json`, `summary.json` and CSV projections to
//! the output directory. Reports are sorted by `(graph_id, r, bound)` so a
//! run is reproducible byte for byte regardless of thread count.

mod tables;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundName, BoundReport, CheckConfig, GraphContext, HooryContext};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, GenSpec};
use crate::graph::{parse_edge_list, write_edge_list, Graph};

pub use tables::{
    converge_table, cover_table, ConvergeRow, ConvergeTable, CoverRow, CoverTable,
    MAX_CONVERGE_LENGTH,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "UNRAVEL_THREADS";
pub const DEFAULT_RADII: [usize; 3] = [1, 2, 3];

/// A graph to evaluate: generated from a spec or read from an edge-list
/// file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusEntry {
    Spec(GenSpec),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub corpus: Vec<CorpusEntry>,
    pub radii: Vec<usize>,
    pub check: CheckConfig,
    /// `None` defers to `UNRAVEL_THREADS`, then to the number of cores.
    pub threads: Option<usize>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(corpus: Vec<CorpusEntry>) -> Self {
        RunConfig {
            corpus,
            radii: DEFAULT_RADII.to_vec(),
            check: CheckConfig::default(),
            threads: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.radii.contains(&0) {
            return Err(Error::InvalidParameters(
                "radii must be a nonempty list of values >= 1".into(),
            ));
        }
        if self.check.injection_node_cap == 0 {
            return Err(Error::InvalidParameters("node cap must be positive".into()));
        }
        if !(self.check.slack_tol >= 0.0 && self.check.eig.tol > 0.0) {
            return Err(Error::InvalidParameters(
                "tolerances must be positive".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameters(
                "thread count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Worker count: the explicit value, else `UNRAVEL_THREADS`, else the
/// number of available cores.
pub fn thread_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .filter(|&t| t > 0)
        })
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoadError {
    pub source: String,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub id: String,
    pub graph: Graph,
}

pub fn read_graph_file(path: &Path) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn load_entry(entry: &CorpusEntry) -> std::result::Result<LoadedGraph, LoadError> {
    match entry {
        CorpusEntry::Spec(spec) => generate(spec)
            .map(|graph| LoadedGraph {
                id: spec.name(),
                graph,
            })
            .map_err(|e| LoadError {
                source: spec.name(),
                message: e.to_string(),
            }),
        CorpusEntry::File(path) => {
            let id = path
                .file_name()
                .map(|s| s.to_string_lossy().trim_end_matches(".edges").to_string())
                .unwrap_or_else(|| path.display().to_string());
            read_graph_file(path)
                .map(|graph| LoadedGraph { id, graph })
                .map_err(|e| LoadError {
                    source: path.display().to_string(),
                    message: e.to_string(),
                })
        }
    }
}

/// Expands `--corpus` arguments. Directories contribute their `*.edges`
/// files in name order; `.json` files hold one spec or a list of specs;
/// anything else is read as an edge list.
pub fn expand_corpus_paths(paths: &[PathBuf]) -> Result<Vec<CorpusEntry>> {
    let mut entries = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "edges"))
                .collect();
            files.sort();
            entries.extend(files.into_iter().map(CorpusEntry::File));
        } else if path.extension().is_some_and(|x| x == "json") {
            let text = fs::read_to_string(path)?;
            let specs: Vec<GenSpec> = match serde_json::from_str::<Vec<GenSpec>>(&text) {
                Ok(list) => list,
                Err(_) => vec![serde_json::from_str::<GenSpec>(&text)?],
            };
            entries.extend(specs.into_iter().map(CorpusEntry::Spec));
        } else {
            entries.push(CorpusEntry::File(path.clone()));
        }
    }
    Ok(entries)
}

/// About thirty small and medium graphs covering every family.
pub fn smoke_corpus(seed: u64) -> Vec<GenSpec> {
    use Family::*;
    let fixed = [
        Path { n: 12 },
        Cycle { n: 5 },
        Cycle { n: 12 },
        Cycle { n: 30 },
        Complete { n: 4 },
        Complete { n: 5 },
        CompleteBipartite { a: 3, b: 3 },
        CompleteBipartite { a: 2, b: 5 },
        Star { k: 6 },
        DRegularTree { d: 3, depth: 3 },
        Petersen,
    ];
    let random = [
        RandomRegular { n: 12, d: 3 },
        RandomRegular { n: 20, d: 3 },
        RandomRegular { n: 50, d: 3 },
        RandomRegular { n: 100, d: 3 },
        RandomRegular { n: 200, d: 3 },
        RandomRegular { n: 40, d: 4 },
        RandomRegular { n: 100, d: 4 },
        RandomRegular { n: 60, d: 5 },
        RandomTree { n: 20 },
        RandomTree { n: 40 },
        ErdosRenyi { n: 40, p: 0.1 },
        ErdosRenyi { n: 60, p: 0.08 },
    ];
    let cores = [
        ErdosRenyi { n: 50, p: 0.08 },
        ErdosRenyi { n: 80, p: 0.05 },
        ErdosRenyi { n: 100, p: 0.05 },
        ErdosRenyi { n: 150, p: 0.03 },
        ErdosRenyi { n: 200, p: 0.025 },
    ];
    let mut specs: Vec<GenSpec> = fixed.into_iter().map(|f| GenSpec::new(f, 0)).collect();
    specs.extend(random.into_iter().map(|f| GenSpec::new(f, seed)));
    specs.extend(cores.into_iter().map(|f| GenSpec::new(f, seed).stripped()));
    specs
}

/// The property-sweep corpus: random regular graphs with `d` in 3..=5 and
/// `n <= 300`, leaf-stripped Erdős–Rényi graphs with `n <= 200`, cycles,
/// the Petersen graph, and a set of graphs with at most 12 vertices.
pub fn acceptance_corpus(seed: u64) -> Vec<GenSpec> {
    use Family::*;
    let mut specs = Vec::new();
    for d in 3..=5 {
        for n in [20, 50, 100, 200, 300] {
            for s in 0..6 {
                specs.push(GenSpec::new(RandomRegular { n, d }, seed + s));
            }
        }
    }
    for n in [30usize, 60, 100, 150, 200] {
        for c in [3.0, 4.0, 6.0] {
            for s in 0..5 {
                let p = c / n as f64;
                specs.push(GenSpec::new(ErdosRenyi { n, p }, seed + s).stripped());
            }
        }
    }
    specs.extend((3..=32).map(|n| GenSpec::new(Cycle { n }, 0)));
    specs.push(GenSpec::new(Petersen, 0));
    specs.extend((3..=7).map(|n| GenSpec::new(Complete { n }, 0)));
    for (a, b) in [(2, 3), (3, 3), (3, 4), (2, 6)] {
        specs.push(GenSpec::new(CompleteBipartite { a, b }, 0));
    }
    for n in [6, 8, 10, 12] {
        for s in 0..4 {
            specs.push(GenSpec::new(RandomRegular { n, d: 3 }, seed + s));
        }
    }
    specs.push(GenSpec::new(RandomRegular { n: 10, d: 4 }, seed));
    specs.push(GenSpec::new(RandomRegular { n: 12, d: 5 }, seed));
    specs
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTotals {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_skip: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackWitness {
    pub slack: f64,
    pub graph_id: String,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub graphs: usize,
    pub radii: Vec<usize>,
    /// Number of `(graph, bound, r)` triples; equals the sum of all totals.
    pub evaluated: usize,
    pub totals: BTreeMap<BoundName, BoundTotals>,
    /// Smallest slack among hypothesis-satisfying reports.
    pub min_slack: BTreeMap<BoundName, SlackWitness>,
    pub violations: usize,
    pub load_errors: Vec<LoadError>,
    pub wall_time_ms: u64,
}

impl RunSummary {
    pub fn from_reports(
        reports: &[BoundReport],
        graphs: usize,
        radii: &[usize],
        load_errors: Vec<LoadError>,
    ) -> Self {
        let mut totals: BTreeMap<BoundName, BoundTotals> = BTreeMap::new();
        let mut min_slack: BTreeMap<BoundName, SlackWitness> = BTreeMap::new();
        for report in reports {
            let t = totals.entry(report.bound).or_default();
            if !report.hypothesis_ok {
                t.hypothesis_skip += 1;
                continue;
            }
            if report.pass {
                t.pass += 1;
            } else {
                t.fail += 1;
            }
            if let Some(slack) = report.slack {
                let better = min_slack.get(&report.bound).is_none_or(|w| slack < w.slack);
                if better {
                    min_slack.insert(
                        report.bound,
                        SlackWitness {
                            slack,
                            graph_id: report.graph_id.clone(),
                            r: report.r,
                        },
                    );
                }
            }
        }
        RunSummary {
            schema_version: SCHEMA_VERSION,
            graphs,
            radii: radii.to_vec(),
            evaluated: reports.len(),
            violations: reports.iter().filter(|r| r.is_violation()).count(),
            totals,
            min_slack,
            load_errors,
            wall_time_ms: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub reports: Vec<BoundReport>,
    pub hoory: Vec<HooryContext>,
    pub summary: RunSummary,
}

impl VerifyOutcome {
    /// 1 if a hypothesis-satisfying check failed, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.violations > 0)
    }
}

/// All reports for one graph over the given radii.
pub fn verify_graph(
    id: &str,
    graph: &Graph,
    radii: &[usize],
    check: &CheckConfig,
) -> (Vec<BoundReport>, Vec<HooryContext>) {
    let ctx = GraphContext::new(id, graph, check.clone());
    let mut reports = Vec::new();
    let mut hoory = Vec::new();
    for &r in radii {
        reports.extend(ctx.verify(r));
        hoory.extend(ctx.hoory_context(r));
    }
    (reports, hoory)
}

pub fn sort_reports(reports: &mut [BoundReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Loads the corpus and runs every check. Graphs that fail to load are
/// recorded in the summary and the rest of the batch continues.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let mut graphs = Vec::new();
    let mut load_errors = Vec::new();
    for entry in &cfg.corpus {
        match load_entry(entry) {
            Ok(g) => graphs.push(g),
            Err(e) => load_errors.push(e),
        }
    }
    let per_graph = crate::par::with_threads(thread_count(cfg.threads), || {
        crate::par::map_indices(graphs.len(), |i| {
            let g = &graphs[i];
            verify_graph(&g.id, &g.graph, &cfg.radii, &cfg.check)
        })
    });
    let mut reports = Vec::new();
    let mut hoory = Vec::new();
    for (r, h) in per_graph {
        reports.extend(r);
        hoory.extend(h);
    }
    sort_reports(&mut reports);
    hoory.sort_by(|a, b| (&a.graph_id, a.r).cmp(&(&b.graph_id, b.r)));
    let mut summary = RunSummary::from_reports(&reports, graphs.len(), &cfg.radii, load_errors);
    summary.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(VerifyOutcome {
        reports,
        hoory,
        summary,
    })
}

#[derive(Serialize, Deserialize)]
struct ReportsFile {
    schema_version: u32,
    reports: Vec<BoundReport>,
}

pub fn reports_json(reports: &[BoundReport]) -> String {
    let file = ReportsFile {
        schema_version: SCHEMA_VERSION,
        reports: reports.to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("reports serialize") + "\n"
}

pub fn read_reports(path: &Path) -> Result<Vec<BoundReport>> {
    let file: ReportsFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidParameters(format!(
            "unsupported schema version {}",
            file.schema_version
        )));
    }
    Ok(file.reports)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

/// CSV projection of the reports, columns in JSON field order. Witness
/// vertices are separated by `;`.
pub fn reports_csv(reports: &[BoundReport]) -> String {
    csv_text(|w| {
        w.write_record([
            "graph_id",
            "bound",
            "r",
            "lhs",
            "rhs",
            "slack",
            "witness",
            "hypothesis_ok",
            "pass",
            "tol",
            "runtime_ms",
            "note",
        ])?;
        for r in reports {
            let witness = r
                .witness
                .as_ref()
                .map(|w| {
                    w.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            w.write_record([
                r.graph_id.clone(),
                r.bound.to_string(),
                r.r.to_string(),
                opt(r.lhs),
                opt(r.rhs),
                opt(r.slack),
                witness,
                r.hypothesis_ok.to_string(),
                r.pass.to_string(),
                r.tol.to_string(),
                opt(r.runtime_ms),
                r.note.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

pub fn hoory_csv(rows: &[HooryContext]) -> String {
    csv_text(|w| {
        w.write_record(["graph_id", "r", "c", "lhs", "rhs", "label"])?;
        for h in rows {
            w.write_record([
                h.graph_id.clone(),
                h.r.to_string(),
                h.c.to_string(),
                h.lhs.to_string(),
                h.rhs.to_string(),
                h.label.clone(),
            ])?;
        }
        Ok(())
    })
}

pub fn summary_csv(summary: &RunSummary) -> String {
    csv_text(|w| {
        w.write_record([
            "bound",
            "pass",
            "fail",
            "hypothesis_skip",
            "min_slack",
            "min_slack_graph",
            "min_slack_r",
        ])?;
        for (bound, t) in &summary.totals {
            let m = summary.min_slack.get(bound);
            w.write_record([
                bound.to_string(),
                t.pass.to_string(),
                t.fail.to_string(),
                t.hypothesis_skip.to_string(),
                opt(m.map(|m| m.slack)),
                m.map(|m| m.graph_id.clone()).unwrap_or_default(),
                opt(m.map(|m| m.r)),
            ])?;
        }
        Ok(())
    })
}

/// Writes `reports.json`, `summary.json`, `reports.csv`, `summary.csv` and
/// `hoory_context.csv` into `dir`.
pub fn write_outputs(dir: &Path, outcome: &VerifyOutcome) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("reports.json"), reports_json(&outcome.reports))?;
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&outcome.summary)? + "\n",
    )?;
    fs::write(dir.join("reports.csv"), reports_csv(&outcome.reports))?;
    fs::write(dir.join("summary.csv"), summary_csv(&outcome.summary))?;
    fs::write(dir.join("hoory_context.csv"), hoory_csv(&outcome.hoory))?;
    Ok(())
}

/// Metadata written next to a generated edge list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub schema_version: u32,
    pub id: String,
    pub spec: GenSpec,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub average_degree: crate::graph::AverageDegree,
}

/// Generates `spec` and writes `{name}.edges` plus `{name}.json` into
/// `dir`. Returns the edge-list path.
pub fn write_generated(dir: &Path, spec: &GenSpec) -> Result<PathBuf> {
    let graph = generate(spec)?;
    fs::create_dir_all(dir)?;
    let name = spec.name();
    let edges = dir.join(format!("{name}.edges"));
    fs::write(&edges, write_edge_list(&graph))?;
    let meta = GraphMetadata {
        schema_version: SCHEMA_VERSION,
        id: name.clone(),
        spec: spec.clone(),
        vertex_count: graph.vertex_count(),
        edge_count: graph.edge_count(),
        min_degree: graph.min_degree(),
        max_degree: graph.max_degree(),
        average_degree: graph.average_degree(),
    };
    fs::write(
        dir.join(format!("{name}.json")),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;
    Ok(edges)
}
