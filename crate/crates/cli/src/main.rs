//! Command-line front end: each pipeline stage as a subcommand, for
//! scripting, fixtures, and benchmarks.
//!
//! Every subcommand is a thin shell over the library; payloads go to stdout,
//! diagnostics to stderr. Exit codes are stable per error class:
//! 0 success, 1 usage, 2 parse, 3 precondition, 4 verification failure,
//! 5 internal assertion (or a harness counterexample).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use raagcolor::graph::{detect_format, min_coloring_oracle, parse_coloring, parse_graph, Graph};
use raagcolor::hom::Homomorphism;
use raagcolor::instances::bench_extraction;
use raagcolor::reduction::{
    coloring_to_surjection, harness_csv, labeled_graphs, pipeline_report, surjection_to_coloring,
    EquivalenceReport, ExtractError, DEFAULT_EXHAUSTIVE_BOUND,
};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

/// Worker-count override for the harness; the only environment variable the
/// tool reads.
const WORKERS_ENV: &str = "RAAGCOLOR_WORKERS";

#[derive(Parser)]
#[command(
    name = "raagcolor",
    about = "Graph k-coloring through homomorphisms onto products of free groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the chromatic number and a witness coloring
    Chromatic {
        graph_file: PathBuf,
        /// Largest color count to try; defaults to the vertex count
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Build the homomorphism induced by a proper coloring (JSON to stdout)
    Build {
        graph_file: PathBuf,
        coloring_file: PathBuf,
    },
    /// Extract a proper coloring from a homomorphism file
    Extract { hom_file: PathBuf },
    /// Check the edge relations and the H1 condition of a homomorphism file
    Verify { hom_file: PathBuf },
    /// Exhaustive small-graph equivalence harness (CSV to stdout)
    Harness {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        kmin: usize,
        /// Defaults to nmax
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Median extraction wall-times on generated scrambled instances
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Emit a seeded random graph in edge-list format
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_PRECONDITION,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    let format = detect_format(&text);
    parse_graph(&text, format)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_hom(path: &Path) -> Result<Homomorphism, Failure> {
    let text = read(path)?;
    Homomorphism::from_json(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn cmd_chromatic(graph_file: &Path, kmax: Option<usize>) -> Result<(), Failure> {
    let g = load_graph(graph_file)?;
    let kmax = kmax.unwrap_or_else(|| g.vertex_count().max(1));
    if kmax == 0 {
        return Err(Failure::new(EXIT_USAGE, "--kmax must be at least 1"));
    }
    match min_coloring_oracle(&g, kmax) {
        Some(c) => {
            println!("{}", c.color_count());
            print!("{}", c.to_text());
        }
        None => println!("none <= {kmax}"),
    }
    Ok(())
}

fn cmd_build(graph_file: &Path, coloring_file: &Path) -> Result<(), Failure> {
    let g = load_graph(graph_file)?;
    let text = read(coloring_file)?;
    let c = parse_coloring(&text, g.vertex_count())
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", coloring_file.display())))?;
    let h = coloring_to_surjection(&g, &c)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    println!("{}", h.to_json());
    Ok(())
}

fn extract_failure(e: ExtractError) -> Failure {
    match e {
        ExtractError::NotAHomomorphism(edges) => {
            let list: Vec<String> = edges.iter().map(|(u, v)| format!("edge {u} {v}")).collect();
            Failure::new(
                EXIT_VERIFICATION,
                format!("images fail to commute on: {}", list.join(", ")),
            )
        }
        ExtractError::H1NotIsomorphism => Failure::new(
            EXIT_VERIFICATION,
            "H1: abelianization matrix is singular (det = 0)",
        ),
        ExtractError::Internal(msg) => Failure::new(EXIT_INTERNAL, msg),
    }
}

fn cmd_extract(hom_file: &Path) -> Result<(), Failure> {
    let h = load_hom(hom_file)?;
    let c = surjection_to_coloring(&h).map_err(extract_failure)?;
    print!("{}", c.to_text());
    Ok(())
}

fn cmd_verify(hom_file: &Path) -> Result<(), Failure> {
    let h = load_hom(hom_file)?;
    let report = h.verify();
    let hom_ok = report.is_homomorphism();
    let h1_ok = h.induces_h1_isomorphism();
    println!("hom: {}", if hom_ok { "PASS" } else { "FAIL" });
    println!("h1-iso: {}", if h1_ok { "PASS" } else { "FAIL" });
    if !hom_ok {
        for (u, v) in report.failing_edges() {
            eprintln!("edge {u} {v}: images do not commute");
        }
    }
    if hom_ok && h1_ok {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFICATION, "verification failed"))
    }
}

fn worker_count() -> Result<usize, Failure> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| {
                Failure::new(
                    EXIT_USAGE,
                    format!("{WORKERS_ENV} must be a positive integer, got {v:?}"),
                )
            }),
        Err(_) => Ok(1),
    }
}

/// Runs the harness work items, optionally on a worker pool. Output order is
/// the item order regardless of scheduling.
fn run_items(items: &[(u64, Graph, usize)], workers: usize) -> Vec<EquivalenceReport> {
    if workers <= 1 || items.len() <= 1 {
        return items
            .iter()
            .map(|(id, g, k)| pipeline_report(*id, g, *k))
            .collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut out: Vec<Option<EquivalenceReport>> = vec![None; items.len()];
    std::thread::scope(|scope| {
        for (slots, work) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, (id, g, k)) in slots.iter_mut().zip(work) {
                    *slot = Some(pipeline_report(*id, g, *k));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn cmd_harness(nmax: usize, kmin: usize, kmax: Option<usize>) -> Result<(), Failure> {
    let kmax = kmax.unwrap_or(nmax.max(1));
    if nmax > DEFAULT_EXHAUSTIVE_BOUND {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            format!("--nmax {nmax} exceeds the exhaustive bound {DEFAULT_EXHAUSTIVE_BOUND}"),
        ));
    }
    let workers = worker_count()?;
    let items: Vec<(u64, Graph, usize)> = labeled_graphs(nmax)
        .flat_map(|(id, g)| (kmin..=kmax).map(move |k| (id, g.clone(), k)))
        .collect();
    let reports = run_items(&items, workers);
    print!("{}", harness_csv(&reports));
    let counterexamples = reports.iter().filter(|r| r.is_counterexample()).count();
    if counterexamples > 0 {
        return Err(Failure::new(
            EXIT_INTERNAL,
            format!("{counterexamples} counterexample(s) found"),
        ));
    }
    Ok(())
}

fn cmd_bench(sizes: &[usize], instances: usize, seed: u64) -> Result<(), Failure> {
    if sizes.is_empty() || instances == 0 {
        return Err(Failure::new(EXIT_USAGE, "need sizes and at least one instance"));
    }
    let rows = bench_extraction(sizes, instances, seed);
    println!("n,instances,median_ms");
    for row in rows {
        println!(
            "{},{},{:.3}",
            row.n,
            row.instances,
            row.median.as_secs_f64() * 1e3
        );
    }
    Ok(())
}

fn cmd_gen(n: usize, p: f64, seed: u64) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::new(EXIT_USAGE, "--p must lie in [0, 1]"));
    }
    let g = raagcolor::graph::random_graph(n, p, seed);
    print!("{}", g.to_edge_list());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Chromatic { graph_file, kmax } => cmd_chromatic(&graph_file, kmax),
        Command::Build {
            graph_file,
            coloring_file,
        } => cmd_build(&graph_file, &coloring_file),
        Command::Extract { hom_file } => cmd_extract(&hom_file),
        Command::Verify { hom_file } => cmd_verify(&hom_file),
        Command::Harness { nmax, kmin, kmax } => cmd_harness(nmax, kmin, kmax),
        Command::Bench {
            sizes,
            instances,
            seed,
        } => cmd_bench(&sizes, instances, seed),
        Command::Gen { n, p, seed } => cmd_gen(n, p, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
