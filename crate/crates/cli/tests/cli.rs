//! End-to-end CLI tests: payloads, diagnostics, and the exit-code contract
//! (0 ok, 1 usage, 2 parse, 3 precondition, 4 verification, 5 internal).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use raagcolor::graph::{parse_coloring, parse_graph, validate_coloring, GraphFormat};
use raagcolor::hom::Homomorphism;
use raagcolor::instances::{relabel_vertices, scramble_homomorphism};
use raagcolor::reduction::coloring_to_surjection;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_raagcolor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

struct Fixtures {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("tempdir");
        let root = dir.path().to_path_buf();
        Fixtures { _dir: dir, root }
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.root.join(name);
        fs::write(&path, contents).expect("fixture written");
        path
    }
}

fn k3_edge_list() -> &'static str {
    "3 3\n0 1\n1 2\n0 2\n"
}

fn petersen_edge_list() -> String {
    let mut edges = Vec::new();
    for i in 0..5usize {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let mut out = format!("10 {}\n", edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[test]
fn chromatic_reports_three_for_k3_with_witness() {
    let fx = Fixtures::new();
    let graph = fx.write("k3.txt", k3_edge_list());
    let out = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("3"));
    let witness = parse_coloring(&text[2..], 3).unwrap();
    let g = parse_graph(k3_edge_list(), GraphFormat::EdgeList).unwrap();
    assert!(validate_coloring(&g, &witness).unwrap());
}

#[test]
fn chromatic_reports_two_for_c4() {
    let fx = Fixtures::new();
    let graph = fx.write("c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let out = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("2"));
}

#[test]
fn chromatic_reports_three_for_petersen() {
    let fx = Fixtures::new();
    let graph = fx.write("petersen.txt", &petersen_edge_list());
    let out = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("3"));
}

#[test]
fn chromatic_accepts_dimacs_input() {
    let fx = Fixtures::new();
    let graph = fx.write("k3.col", "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    let out = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("3"));
}

#[test]
fn chromatic_says_none_when_kmax_is_too_small() {
    let fx = Fixtures::new();
    let graph = fx.write("k3.txt", k3_edge_list());
    let out = run(&["chromatic", graph.to_str().unwrap(), "--kmax", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "none <= 2\n");
}

#[test]
fn chromatic_parse_error_is_exit_2() {
    let fx = Fixtures::new();
    let graph = fx.write("bad.txt", "3 1\n0 zero\n");
    let out = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_is_exit_3() {
    let out = run(&["chromatic", "/nonexistent/graph.txt"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn unknown_subcommand_is_exit_1() {
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn build_emits_the_library_json_byte_for_byte() {
    let fx = Fixtures::new();
    let graph = fx.write("k3.txt", k3_edge_list());
    let coloring = fx.write("k3.coloring", "0 1\n1 2\n2 3\n");
    let out = run(&["build", graph.to_str().unwrap(), coloring.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let g = parse_graph(k3_edge_list(), GraphFormat::EdgeList).unwrap();
    let c = parse_coloring("0 1\n1 2\n2 3\n", 3).unwrap();
    let h = coloring_to_surjection(&g, &c).unwrap();
    assert_eq!(stdout(&out), format!("{}\n", h.to_json()));

    let parsed = Homomorphism::from_json(&stdout(&out)).unwrap();
    assert_eq!(parsed.shape().ranks(), &[1, 1, 1]);
}

#[test]
fn build_rejects_improper_coloring_with_exit_3_and_no_payload() {
    let fx = Fixtures::new();
    let graph = fx.write("k3.txt", k3_edge_list());
    let coloring = fx.write("k3.coloring", "0 1\n1 1\n2 2\n");
    let out = run(&["build", graph.to_str().unwrap(), coloring.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).is_empty());
}

fn round_trip_fixture(fx: &Fixtures) -> PathBuf {
    let g = parse_graph(k3_edge_list(), GraphFormat::EdgeList).unwrap();
    let c = parse_coloring("0 1\n1 2\n2 3\n", 3).unwrap();
    let h = coloring_to_surjection(&g, &c).unwrap();
    fx.write("k3.hom.json", &h.to_json())
}

#[test]
fn extract_recovers_a_coloring_from_the_round_trip_fixture() {
    let fx = Fixtures::new();
    let hom = round_trip_fixture(&fx);
    let out = run(&["extract", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let coloring = parse_coloring(&stdout(&out), 3).unwrap();
    let g = parse_graph(k3_edge_list(), GraphFormat::EdgeList).unwrap();
    assert!(validate_coloring(&g, &coloring).unwrap());
    assert_eq!(coloring.colors_used(), 3);
}

#[test]
fn extract_lists_noncommuting_edges_with_exit_4() {
    let fx = Fixtures::new();
    let hom = fx.write(
        "bad.hom.json",
        r#"{"n":2,"edges":[[0,1]],"ranks":[2],"images":[["x0"],["x1"]]}"#,
    );
    let out = run(&["extract", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("edge 0 1"), "stderr: {}", stderr(&out));
}

#[test]
fn extract_flags_singular_abelianization_with_h1_marker() {
    let fx = Fixtures::new();
    let hom = fx.write(
        "singular.hom.json",
        r#"{"n":2,"edges":[],"ranks":[2],"images":[["x0"],["x0"]]}"#,
    );
    let out = run(&["extract", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("H1"), "stderr: {}", stderr(&out));
}

#[test]
fn extract_handles_a_scrambled_fixture_suite() {
    let fx = Fixtures::new();
    for case in 0..10u64 {
        let g = raagcolor::graph::random_graph(12, 0.25, 7_000 + case);
        let c = raagcolor::graph::min_coloring_oracle(&g, 12).unwrap();
        let h = coloring_to_surjection(&g, &c).unwrap();
        let h = relabel_vertices(&scramble_homomorphism(&h, 55, case), case);
        let path = fx.write(&format!("scrambled{case}.json"), &h.to_json());
        let out = run(&["extract", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "case {case} stderr: {}", stderr(&out));
        let coloring = parse_coloring(&stdout(&out), 12).unwrap();
        assert!(validate_coloring(h.graph(), &coloring).unwrap());
        assert!(coloring.color_count() <= c.color_count());
    }
}

#[test]
fn verify_double_pass_on_a_valid_fixture() {
    let fx = Fixtures::new();
    let hom = round_trip_fixture(&fx);
    let out = run(&["verify", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "hom: PASS\nh1-iso: PASS\n");
}

#[test]
fn verify_fails_h1_on_duplicate_images() {
    let fx = Fixtures::new();
    // Commuting-but-singular: two non-adjacent vertices share one generator.
    let hom = fx.write(
        "dup.hom.json",
        r#"{"n":2,"edges":[],"ranks":[2],"images":[["x0"],["x0"]]}"#,
    );
    let out = run(&["verify", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert_eq!(stdout(&out), "hom: PASS\nh1-iso: FAIL\n");
}

#[test]
fn verify_fails_hom_on_noncommuting_edge_images() {
    let fx = Fixtures::new();
    let hom = fx.write(
        "bad.hom.json",
        r#"{"n":2,"edges":[[0,1]],"ranks":[2],"images":[["x0"],["x1"]]}"#,
    );
    let out = run(&["verify", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert_eq!(stdout(&out).lines().next(), Some("hom: FAIL"));
    assert!(stderr(&out).contains("edge 0 1"));
}

#[test]
fn verify_malformed_json_is_exit_2() {
    let fx = Fixtures::new();
    let hom = fx.write("broken.json", "{ not json");
    let out = run(&["verify", hom.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn harness_nmax_3_emits_24_rows_and_no_counterexamples() {
    let out = run(&["harness", "--nmax", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // Header, 8 graphs x k in 1..=3, trailer.
    assert_eq!(lines.len(), 1 + 24 + 1);
    assert_eq!(
        lines[0],
        "graph_id,k,oracle_colorable,construction_succeeded,extraction_valid,colors_used"
    );
    assert_eq!(*lines.last().unwrap(), "counterexamples: 0");
}

#[test]
fn harness_nmax_5_covers_all_1024_graphs() {
    let out = run(&["harness", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // Header, 1024 graphs x k in 1..=5, trailer.
    assert_eq!(text.lines().count(), 1 + 1024 * 5 + 1);
    assert_eq!(text.lines().last(), Some("counterexamples: 0"));
}

#[test]
fn harness_is_deterministic_across_worker_counts() {
    let sequential = run(&["harness", "--nmax", "4"]);
    let parallel = bin()
        .args(["harness", "--nmax", "4"])
        .env("RAAGCOLOR_WORKERS", "3")
        .output()
        .expect("binary runs");
    assert_eq!(code(&sequential), 0);
    assert_eq!(code(&parallel), 0);
    assert_eq!(stdout(&sequential), stdout(&parallel));
}

#[test]
fn harness_rejects_oversized_nmax_with_exit_3() {
    let out = run(&["harness", "--nmax", "6"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn bench_emits_one_row_per_size() {
    let out = run(&["bench", "--sizes", "6,8", "--instances", "2", "--seed", "5"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "n,instances,median_ms");
    assert!(lines[1].starts_with("6,2,"));
    assert!(lines[2].starts_with("8,2,"));
}

#[test]
fn gen_is_deterministic_and_respects_extremes() {
    let a = run(&["gen", "--n", "12", "--p", "0.3", "--seed", "9"]);
    let b = run(&["gen", "--n", "12", "--p", "0.3", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));

    let empty = run(&["gen", "--n", "5", "--p", "0"]);
    assert_eq!(stdout(&empty), "5 0\n");

    let bad = run(&["gen", "--n", "5", "--p", "1.5"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn gen_output_feeds_back_into_chromatic() {
    let fx = Fixtures::new();
    let out = run(&["gen", "--n", "8", "--p", "0.4", "--seed", "3"]);
    let graph = fx.write("gen.txt", &stdout(&out));
    let chrom = run(&["chromatic", graph.to_str().unwrap()]);
    assert_eq!(code(&chrom), 0);
    let chi: usize = stdout(&chrom).lines().next().unwrap().parse().unwrap();
    assert!((1..=8).contains(&chi));
}

#[test]
fn cli_and_library_extractions_agree_byte_for_byte() {
    let fx = Fixtures::new();
    let hom = round_trip_fixture(&fx);
    let out = run(&["extract", hom.to_str().unwrap()]);
    let h = Homomorphism::from_json(&fs::read_to_string(Path::new(hom.to_str().unwrap())).unwrap())
        .unwrap();
    let c = raagcolor::reduction::surjection_to_coloring(&h).unwrap();
    assert_eq!(stdout(&out), c.to_text());
}
