//! Finite simplicial graphs, proper colorings, text formats, and a
//! brute-force minimum-coloring search.
//!
//! Graphs are stored with 0-indexed vertices and a canonical `(min, max)`
//! edge set; inputs that name vertices differently (DIMACS is 1-indexed on
//! disk) are mapped to indices during parsing. The coloring search
//! ([`min_coloring_oracle`]) is deliberately plain backtracking so it can act
//! as trustworthy ground truth for everything else in the crate.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Structural errors raised when assembling a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}; graphs are simplicial")]
    SelfLoop(usize),
    #[error("endpoint {vertex} out of range for {vertex_count} vertices")]
    EndpointOutOfRange { vertex: usize, vertex_count: usize },
}

/// Errors raised while reading a graph or coloring file, with the offending
/// 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("{0}")]
    Structure(String),
}

/// Errors raised when a coloring does not fit a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has {found} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} has color {color}, outside [1, {color_count}]")]
    ColorOutOfRange {
        vertex: usize,
        color: usize,
        color_count: usize,
    },
}

/// Supported on-disk graph formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// First line `n m`, then `m` lines `u v` with 0-indexed endpoints.
    /// `#` starts a comment.
    EdgeList,
    /// DIMACS coloring format: `p edge n m` header, `e u v` lines with
    /// 1-indexed endpoints, `c` comment lines.
    Dimacs,
}

/// A finite simplicial graph: no loops, no multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, canonicalizing each edge to `(min, max)` order and
    /// collapsing duplicates.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical `(min, max)` order, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Adjacency lists, ascending within each list.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Canonical edge-list serialization; [`parse_graph`] inverts it exactly.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// A vertex coloring with colors in `[1, color_count]`.
///
/// Construction checks the color range; properness with respect to a graph is
/// a separate, explicit check ([`validate_coloring`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    assignment: Vec<usize>,
    color_count: usize,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>, color_count: usize) -> Result<Self, ColoringError> {
        for (vertex, &color) in assignment.iter().enumerate() {
            if color == 0 || color > color_count {
                return Err(ColoringError::ColorOutOfRange {
                    vertex,
                    color,
                    color_count,
                });
            }
        }
        Ok(Coloring {
            assignment,
            color_count,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn color(&self, vertex: usize) -> usize {
        self.assignment[vertex]
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        self.assignment.iter().collect::<BTreeSet<_>>().len()
    }

    /// Serializes as one `vertex color` line per vertex, colors 1-indexed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.assignment.iter().enumerate() {
            let _ = writeln!(out, "{v} {c}");
        }
        out
    }
}

/// True exactly when every edge of `g` has distinctly colored endpoints.
pub fn validate_coloring(g: &Graph, c: &Coloring) -> Result<bool, ColoringError> {
    if c.assignment.len() != g.vertex_count {
        return Err(ColoringError::LengthMismatch {
            expected: g.vertex_count,
            found: c.assignment.len(),
        });
    }
    Ok(g.edges()
        .all(|(u, v)| c.assignment[u] != c.assignment[v]))
}

/// Backtracking k-coloring in vertex order, colors tried ascending. Vertex 0
/// is pinned to color 1; a vertex never tries a color more than one past the
/// largest color used so far, which prunes color permutations without
/// changing the first solution found.
fn backtrack_coloring(adj_earlier: &[Vec<usize>], k: usize) -> Option<Vec<usize>> {
    let n = adj_earlier.len();
    let mut assignment = vec![0usize; n];

    fn go(adj_earlier: &[Vec<usize>], k: usize, assignment: &mut Vec<usize>, v: usize) -> bool {
        if v == assignment.len() {
            return true;
        }
        let max_used = assignment[..v].iter().copied().max().unwrap_or(0);
        let limit = k.min(max_used + 1);
        for color in 1..=limit {
            if adj_earlier[v].iter().all(|&u| assignment[u] != color) {
                assignment[v] = color;
                if go(adj_earlier, k, assignment, v + 1) {
                    return true;
                }
                assignment[v] = 0;
            }
        }
        false
    }

    if go(adj_earlier, k, &mut assignment, 0) {
        Some(assignment)
    } else {
        None
    }
}

/// Exhaustive minimum coloring: returns a proper coloring with exactly
/// `χ(g)` colors when `χ(g) ≤ k_max`, `None` otherwise. Deterministic.
pub fn min_coloring_oracle(g: &Graph, k_max: usize) -> Option<Coloring> {
    assert!(k_max >= 1, "k_max must be at least 1");
    if g.vertex_count == 0 {
        return Some(Coloring {
            assignment: Vec::new(),
            color_count: 0,
        });
    }
    // Only earlier-indexed neighbors constrain a vertex during the search.
    let mut adj_earlier = vec![Vec::new(); g.vertex_count];
    for (u, v) in g.edges() {
        adj_earlier[v].push(u);
    }
    for k in 1..=k_max {
        if let Some(assignment) = backtrack_coloring(&adj_earlier, k) {
            return Some(Coloring {
                assignment,
                color_count: k,
            });
        }
    }
    None
}

/// Erdős–Rényi `G(n, p)`, reproducible for a fixed seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("generated endpoints are in range")
}

fn strip_comment(line: &str, marker: char) -> &str {
    match line.find(marker) {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_two_numbers(line: &str, line_no: usize) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let a = it.next();
    let b = it.next();
    let rest = it.next();
    match (a, b, rest) {
        (Some(a), Some(b), None) => {
            let a = a.parse().map_err(|_| ParseError::Malformed {
                line: line_no,
                message: format!("expected a number, found {a:?}"),
            })?;
            let b = b.parse().map_err(|_| ParseError::Malformed {
                line: line_no,
                message: format!("expected a number, found {b:?}"),
            })?;
            Ok((a, b))
        }
        _ => Err(ParseError::Malformed {
            line: line_no,
            message: format!("expected two whitespace-separated numbers, found {line:?}"),
        }),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (u, v, line)
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, '#').trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_two_numbers(line, line_no)?);
        } else {
            let (u, v) = parse_two_numbers(line, line_no)?;
            edges.push((u, v, line_no));
        }
    }
    let (n, m) = header.ok_or_else(|| ParseError::Structure("empty graph file".into()))?;
    if edges.len() != m {
        return Err(ParseError::Structure(format!(
            "header declares {m} edges but {} edge lines follow",
            edges.len()
        )));
    }
    build_graph(n, edges)
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: "duplicate problem line".into(),
                });
            }
            let rest = rest.trim();
            let rest = rest.strip_prefix("edge").ok_or_else(|| ParseError::Malformed {
                line: line_no,
                message: format!("expected \"p edge n m\", found {line:?}"),
            })?;
            header = Some(parse_two_numbers(rest.trim(), line_no)?);
        } else if let Some(rest) = line.strip_prefix('e') {
            if header.is_none() {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: "edge line before the problem line".into(),
                });
            }
            let (u, v) = parse_two_numbers(rest.trim(), line_no)?;
            if u == 0 || v == 0 {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: "DIMACS vertices are 1-indexed".into(),
                });
            }
            edges.push((u - 1, v - 1, line_no));
        } else {
            return Err(ParseError::Malformed {
                line: line_no,
                message: format!("unrecognized line {line:?}"),
            });
        }
    }
    let (n, m) = header.ok_or_else(|| ParseError::Structure("missing problem line".into()))?;
    if edges.len() != m {
        return Err(ParseError::Structure(format!(
            "problem line declares {m} edges but {} edge lines follow",
            edges.len()
        )));
    }
    build_graph(n, edges)
}

fn build_graph(n: usize, edges: Vec<(usize, usize, usize)>) -> Result<Graph, ParseError> {
    let mut set = BTreeSet::new();
    for (u, v, line) in edges {
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        for w in [u, v] {
            if w >= n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::EndpointOutOfRange {
                        vertex: w,
                        vertex_count: n,
                    },
                });
            }
        }
        set.insert((u.min(v), u.max(v)));
    }
    Ok(Graph {
        vertex_count: n,
        edges: set,
    })
}

/// Parses a graph from text in the given format.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
    }
}

/// Guesses the on-disk format: a `p`/`c`-structured file is DIMACS,
/// anything else is treated as an edge list.
pub fn detect_format(text: &str) -> GraphFormat {
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("p ") || line.starts_with("c ") || line == "c" {
            return GraphFormat::Dimacs;
        }
        break;
    }
    GraphFormat::EdgeList
}

/// Parses a coloring file: one `vertex color` line per vertex, colors
/// 1-indexed, every vertex of the graph listed exactly once.
pub fn parse_coloring(text: &str, vertex_count: usize) -> Result<Coloring, ParseError> {
    let mut colors: Vec<Option<usize>> = vec![None; vertex_count];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, '#').trim();
        if line.is_empty() {
            continue;
        }
        let (vertex, color) = parse_two_numbers(line, line_no)?;
        if vertex >= vertex_count {
            return Err(ParseError::Malformed {
                line: line_no,
                message: format!("vertex {vertex} out of range for {vertex_count} vertices"),
            });
        }
        if color == 0 {
            return Err(ParseError::Malformed {
                line: line_no,
                message: "colors are 1-indexed".into(),
            });
        }
        if colors[vertex].replace(color).is_some() {
            return Err(ParseError::Malformed {
                line: line_no,
                message: format!("vertex {vertex} colored twice"),
            });
        }
    }
    let assignment: Vec<usize> = colors
        .iter()
        .enumerate()
        .map(|(v, c)| {
            c.ok_or_else(|| ParseError::Structure(format!("vertex {v} has no color")))
        })
        .collect::<Result<_, _>>()?;
    let color_count = assignment.iter().copied().max().unwrap_or(0);
    Ok(Coloring {
        assignment,
        color_count,
    })
}

/// `C_n`, the cycle on `n ≥ 3` vertices. Test and fixture helper.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle endpoints are in range")
}

/// `K_n`, the complete graph. Test and fixture helper.
pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::new(n, edges).expect("complete-graph endpoints are in range")
}
