use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unravel_core::bounds::CheckConfig;
use unravel_core::generators::{Family, GenSpec};
use unravel_core::harness::{
    acceptance_corpus, converge_table, cover_table, expand_corpus_paths, load_entry, read_reports,
    run_verify, smoke_corpus, write_generated, write_outputs, CorpusEntry, RunConfig, RunSummary,
    DEFAULT_RADII,
};
use unravel_core::spectral::{EigenConfig, DEFAULT_EIG_TOL};
use unravel_core::unravel::INJECTION_NODE_CAP;
use unravel_core::{Error, Graph};

const EXIT_VIOLATION: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "unravel",
    version,
    about = "Spectral lower bounds via unraveled balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write `{name}.edges` plus `{name}.json`.
    Gen {
        /// Family: path, cycle, complete, complete-bipartite, star,
        /// d-regular-tree, random-regular, erdos-renyi, random-tree, petersen.
        family: String,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate every bound on a corpus and write reports.
    Verify(VerifyArgs),
    /// Closed-walk growth estimates against the spectral radius.
    Converge {
        #[command(flatten)]
        graph: GraphArgs,
        /// Start vertex.
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Longest closed-walk length counted.
        #[arg(long = "k", default_value_t = 40)]
        max_length: usize,
        #[arg(long, default_value_t = DEFAULT_EIG_TOL)]
        eig_tol: f64,
        /// Also write the table as JSON and CSV into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest unraveled ball for each radius up to `--r-max`.
    Cover {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
        #[arg(long, default_value_t = DEFAULT_EIG_TOL)]
        eig_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize the reports in an output directory.
    Report {
        #[arg(long, default_value = "unravel-out")]
        out: PathBuf,
    },
}

#[derive(Args, Default)]
struct FamilyParams {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Number of leaves of a star.
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep only the 2-core.
    #[arg(long)]
    strip_leaves: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Generate instead of reading a file.
    #[arg(long)]
    family: Option<String>,
    #[command(flatten)]
    params: FamilyParams,
}

#[derive(Args)]
struct VerifyArgs {
    /// Edge-list files, directories of `*.edges`, JSON spec lists, or the
    /// built-in corpora `smoke` and `acceptance`.
    #[arg(long, num_args = 1.., default_value = "smoke")]
    corpus: Vec<String>,
    /// Radii, comma separated.
    #[arg(long = "r", value_delimiter = ',', default_values_t = DEFAULT_RADII)]
    radii: Vec<usize>,
    /// Seed for the built-in corpora.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node cap for materialized unraveled balls.
    #[arg(long, default_value_t = INJECTION_NODE_CAP)]
    cap_nodes: u64,
    #[arg(long, default_value = "unravel-out")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EIG_TOL)]
    eig_tol: f64,
    #[arg(long, default_value_t = unravel_core::bounds::DEFAULT_SLACK_TOL)]
    slack_tol: f64,
    /// Worker threads; overrides UNRAVEL_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    /// Record per-report runtimes (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize, Error> {
    value.ok_or_else(|| Error::InvalidParameters(format!("{family} needs --{flag}")))
}

fn parse_family(name: &str, p: &FamilyParams) -> Result<GenSpec, Error> {
    let key = name.to_ascii_lowercase().replace('_', "-");
    let family = match key.as_str() {
        "path" => Family::Path {
            n: need(p.n, "n", name)?,
        },
        "cycle" => Family::Cycle {
            n: need(p.n, "n", name)?,
        },
        "complete" => Family::Complete {
            n: need(p.n, "n", name)?,
        },
        "complete-bipartite" => Family::CompleteBipartite {
            a: need(p.a, "a", name)?,
            b: need(p.b, "b", name)?,
        },
        "star" => Family::Star {
            k: need(p.leaves, "leaves", name)?,
        },
        "d-regular-tree" => Family::DRegularTree {
            d: need(p.d, "d", name)?,
            depth: need(p.depth, "depth", name)?,
        },
        "random-regular" => Family::RandomRegular {
            n: need(p.n, "n", name)?,
            d: need(p.d, "d", name)?,
        },
        "erdos-renyi" => Family::ErdosRenyi {
            n: need(p.n, "n", name)?,
            p: p.p
                .ok_or_else(|| Error::InvalidParameters(format!("{name} needs --p")))?,
        },
        "random-tree" => Family::RandomTree {
            n: need(p.n, "n", name)?,
        },
        "petersen" => Family::Petersen,
        _ => return Err(Error::InvalidParameters(format!("unknown family {name:?}"))),
    };
    let spec = GenSpec::new(family, p.seed);
    let spec = if p.strip_leaves {
        spec.stripped()
    } else {
        spec
    };
    spec.validate()?;
    Ok(spec)
}

fn load_graph(args: &GraphArgs) -> Result<(String, Graph), Error> {
    let entry = match (&args.graph, &args.family) {
        (Some(path), _) => CorpusEntry::File(path.clone()),
        (None, Some(name)) => CorpusEntry::Spec(parse_family(name, &args.params)?),
        (None, None) => {
            return Err(Error::InvalidParameters(
                "give --graph FILE or --family NAME".into(),
            ));
        }
    };
    let loaded = load_entry(&entry)
        .map_err(|e| Error::InvalidParameters(format!("{}: {}", e.source, e.message)))?;
    Ok((loaded.id, loaded.graph))
}

fn corpus_entries(args: &[String], seed: u64) -> Result<Vec<CorpusEntry>, Error> {
    let mut entries = Vec::new();
    for arg in args {
        let path = Path::new(arg);
        match arg.as_str() {
            "smoke" if !path.exists() => {
                entries.extend(smoke_corpus(seed).into_iter().map(CorpusEntry::Spec))
            }
            "acceptance" if !path.exists() => {
                entries.extend(acceptance_corpus(seed).into_iter().map(CorpusEntry::Spec))
            }
            _ if !path.exists() => {
                // Missing files are reported by the run instead of aborting it.
                entries.push(CorpusEntry::File(path.to_path_buf()));
            }
            _ => entries.extend(expand_corpus_paths(&[path.to_path_buf()])?),
        }
    }
    Ok(entries)
}

fn print_summary(summary: &RunSummary) {
    println!(
        "{} graphs, radii {:?}, {} reports, {} violations",
        summary.graphs, summary.radii, summary.evaluated, summary.violations
    );
    println!(
        "{:<22} {:>6} {:>6} {:>6} {:>14}  witness",
        "bound", "pass", "fail", "skip", "min slack"
    );
    for (bound, t) in &summary.totals {
        let (slack, witness) = match summary.min_slack.get(bound) {
            Some(m) => (
                format!("{:.3e}", m.slack),
                format!("{} r={}", m.graph_id, m.r),
            ),
            None => ("-".to_string(), String::new()),
        };
        println!(
            "{:<22} {:>6} {:>6} {:>6} {:>14}  {}",
            bound.as_str(),
            t.pass,
            t.fail,
            t.hypothesis_skip,
            slack,
            witness
        );
    }
    for e in &summary.load_errors {
        eprintln!("load error: {}: {}", e.source, e.message);
    }
}

fn verify(args: VerifyArgs) -> Result<u8, Error> {
    let mut cfg = RunConfig::new(corpus_entries(&args.corpus, args.seed)?);
    cfg.radii = args.radii;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.check = CheckConfig {
        eig: EigenConfig::with_tol(args.eig_tol),
        slack_tol: args.slack_tol,
        injection_node_cap: args.cap_nodes,
        record_timing: args.timing,
        ..CheckConfig::default()
    };
    let outcome = run_verify(&cfg)?;
    write_outputs(&args.out, &outcome)?;
    print_summary(&outcome.summary);
    for r in outcome.reports.iter().filter(|r| r.is_violation()) {
        eprintln!(
            "violation: {} {} r={} lhs={:?} rhs={:?} {}",
            r.graph_id,
            r.bound,
            r.r,
            r.lhs,
            r.rhs,
            r.note.as_deref().unwrap_or("")
        );
    }
    Ok(outcome.exit_code() as u8)
}

fn write_table(out: &Path, stem: &str, json: String, csv: &str) -> Result<(), Error> {
    fs::create_dir_all(out)?;
    fs::write(out.join(format!("{stem}.json")), json + "\n")?;
    fs::write(out.join(format!("{stem}.csv")), csv)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            family,
            params,
            out,
        } => {
            let spec = parse_family(&family, &params)?;
            let path = write_generated(&out, &spec)?;
            println!("{}", path.display());
            Ok(0)
        }
        Command::Verify(args) => verify(args),
        Command::Converge {
            graph,
            vertex,
            max_length,
            eig_tol,
            out,
        } => {
            let (id, g) = load_graph(&graph)?;
            let table =
                converge_table(&id, &g, vertex, max_length, &EigenConfig::with_tol(eig_tol))?;
            let csv = table.to_csv();
            print!("{csv}");
            println!(
                "# lambda1 = {}, monotone = {}",
                table.lambda1, table.monotone
            );
            if let Some(out) = out {
                write_table(
                    &out,
                    &format!("converge-{id}-v{vertex}"),
                    serde_json::to_string_pretty(&table)?,
                    &csv,
                )?;
            }
            Ok(if table.monotone { 0 } else { EXIT_VIOLATION })
        }
        Command::Cover {
            graph,
            r_max,
            eig_tol,
            out,
        } => {
            let (id, g) = load_graph(&graph)?;
            let table = cover_table(&id, &g, r_max, eig_tol)?;
            let csv = table.to_csv();
            print!("{csv}");
            println!(
                "# monotone = {}, above theorem-1 bound = {} (minimum degree >= 2: {})",
                table.monotone, table.above_theorem1, table.min_degree_ok
            );
            if let Some(out) = out {
                write_table(
                    &out,
                    &format!("cover-{id}"),
                    serde_json::to_string_pretty(&table)?,
                    &csv,
                )?;
            }
            let ok = table.monotone && (table.above_theorem1 || !table.min_degree_ok);
            Ok(if ok { 0 } else { EXIT_VIOLATION })
        }
        Command::Report { out } => {
            let reports = read_reports(&out.join("reports.json"))?;
            let summary_path = out.join("summary.json");
            let load_errors = match fs::read_to_string(&summary_path) {
                Ok(text) => serde_json::from_str::<RunSummary>(&text)?.load_errors,
                Err(_) => Vec::new(),
            };
            let mut radii: Vec<usize> = reports.iter().map(|r| r.r).collect();
            radii.sort();
            radii.dedup();
            let mut graphs: Vec<&str> = reports.iter().map(|r| r.graph_id.as_str()).collect();
            graphs.sort();
            graphs.dedup();
            let summary = RunSummary::from_reports(&reports, graphs.len(), &radii, load_errors);
            print_summary(&summary);
            Ok(u8::from(summary.violations > 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
