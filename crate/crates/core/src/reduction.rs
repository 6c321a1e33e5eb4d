//! Both directions of the coloring ⟷ homomorphism equivalence, and the
//! exhaustive small-graph harness that checks them against the brute-force
//! coloring search.
//!
//! Forward: a proper k-coloring with classes `V_1, …, V_k` induces the
//! quotient onto the product of free groups of ranks `|V_i|`, sending each
//! vertex to a distinct generator of its class's factor
//! ([`coloring_to_surjection`]).
//!
//! Backward: any structurally valid map that satisfies the edge relations and
//! has a nonsingular abelianization matrix yields a proper coloring: select a
//! block row partition of the matrix and color each vertex by the block its
//! row landed in ([`surjection_to_coloring`]). Two rows in one block are
//! linearly independent inside that block's columns, while images of adjacent
//! vertices commute and therefore have proportional block vectors — so
//! adjacent vertices can never share a block.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::freegroup::{ProductElement, ProductShape};
use crate::graph::{min_coloring_oracle, validate_coloring, Coloring, ColoringError, Graph};
use crate::hom::Homomorphism;
use crate::linalg::{select_block_rows, LinalgError};

/// Errors from the coloring-to-homomorphism direction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("coloring is not proper: edge ({0}, {1}) has equal colors")]
    ImproperColoring(usize, usize),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Errors from the homomorphism-to-coloring direction, one per failure mode.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    /// The map is not a homomorphism; carries every failing edge.
    #[error("images of {} edge(s) fail to commute: {0:?}", .0.len())]
    NotAHomomorphism(Vec<(usize, usize)>),
    /// The abelianization matrix is singular, so the map does not induce an
    /// isomorphism on first rational homology.
    #[error("abelianization matrix is singular; the H1 condition fails")]
    H1NotIsomorphism,
    /// The extracted assignment failed validation or the row selection gave
    /// up; either the input is inconsistent in a way the preconditions missed
    /// or there is an implementation bug. Never returned silently.
    #[error("internal assertion: {0}")]
    Internal(String),
}

/// Errors from [`round_trip`], whichever direction failed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Errors from the exhaustive harness.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("n = {n} exceeds the exhaustive bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
}

/// Builds the homomorphism induced by a proper coloring.
///
/// Colors that the assignment never uses are compressed away first, so the
/// product has one factor per nonempty color class and every factor rank
/// `m_i = |V_i|` is at least 1. Within a class, vertices take distinct
/// generators in ascending vertex order, which makes the abelianization
/// matrix a permutation matrix.
pub fn coloring_to_surjection(g: &Graph, c: &Coloring) -> Result<Homomorphism, BuildError> {
    if !validate_coloring(g, c)? {
        let (u, v) = g
            .edges()
            .find(|&(u, v)| c.color(u) == c.color(v))
            .expect("an improper coloring has a monochromatic edge");
        return Err(BuildError::ImproperColoring(u, v));
    }

    // Compress to the colors actually used, keeping their relative order.
    let mut used: Vec<usize> = c.assignment().to_vec();
    used.sort_unstable();
    used.dedup();
    let compress = |color: usize| used.binary_search(&color).expect("color is used");

    let k = used.len();
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &color) in c.assignment().iter().enumerate() {
        classes[compress(color)].push(v);
    }
    let shape = ProductShape::new(classes.iter().map(Vec::len).collect())
        .expect("compressed classes are nonempty");

    let mut images = vec![ProductElement::identity(shape.clone()); g.vertex_count()];
    for (factor, class) in classes.iter().enumerate() {
        for (position, &v) in class.iter().enumerate() {
            images[v] = ProductElement::generator(shape.clone(), factor, position)
                .expect("position is within the factor rank");
        }
    }
    Ok(Homomorphism::new(g.clone(), shape, images).expect("construction satisfies the invariants"))
}

/// Extracts a proper coloring from a homomorphism.
///
/// Preconditions are checked, not assumed: the edge relations must hold and
/// the abelianization matrix must be nonsingular. The extracted coloring is
/// validated before it is returned; a failure there is reported as an
/// internal assertion rather than silently handed back.
pub fn surjection_to_coloring(h: &Homomorphism) -> Result<Coloring, ExtractError> {
    let report = h.verify();
    if !report.is_homomorphism() {
        return Err(ExtractError::NotAHomomorphism(
            report.failing_edges().to_vec(),
        ));
    }
    let matrix = h.abelianization_matrix();
    let partition = select_block_rows(&matrix, h.shape()).map_err(|e| match e {
        LinalgError::Singular => ExtractError::H1NotIsomorphism,
        other => ExtractError::Internal(other.to_string()),
    })?;

    let assignment: Vec<usize> = partition
        .block_assignment()
        .into_iter()
        .map(|block| block + 1)
        .collect();
    let coloring = Coloring::new(assignment, h.shape().factor_count())
        .map_err(|e| ExtractError::Internal(e.to_string()))?;
    match validate_coloring(h.graph(), &coloring) {
        Ok(true) => Ok(coloring),
        Ok(false) => Err(ExtractError::Internal(
            "extracted coloring is improper; input violates the checked preconditions".into(),
        )),
        Err(e) => Err(ExtractError::Internal(e.to_string())),
    }
}

/// Builds the homomorphism from a coloring and immediately extracts a
/// coloring back. The result is proper and never uses more colors than the
/// input declared.
pub fn round_trip(g: &Graph, c: &Coloring) -> Result<Coloring, PipelineError> {
    let h = coloring_to_surjection(g, c)?;
    Ok(surjection_to_coloring(&h)?)
}

/// One harness record: what the oracle said against what the pipeline did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub graph_id: u64,
    pub k: usize,
    pub oracle_colorable: bool,
    pub construction_succeeded: bool,
    pub extraction_valid: bool,
    pub colors_used: usize,
}

impl EquivalenceReport {
    /// A disagreement between oracle k-colorability and pipeline success.
    pub fn is_counterexample(&self) -> bool {
        self.oracle_colorable != self.pipeline_succeeded()
    }

    fn pipeline_succeeded(&self) -> bool {
        self.oracle_colorable
            && self.construction_succeeded
            && self.extraction_valid
            && self.colors_used <= self.k
    }

    pub const CSV_HEADER: &'static str =
        "graph_id,k,oracle_colorable,construction_succeeded,extraction_valid,colors_used";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.graph_id,
            self.k,
            self.oracle_colorable,
            self.construction_succeeded,
            self.extraction_valid,
            self.colors_used
        )
    }
}

/// Default cap on exhaustive enumeration; 2^C(n,2) graphs at n = 5 is 1024.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 5;

/// All labeled graphs on `n` vertices, as `(graph_id, graph)` with the id the
/// edge bitmask over pairs in lexicographic order.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = (u64, Graph)> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 63, "graph ids are 64-bit edge masks");
    let count: u64 = 1 << pairs.len();
    (0..count).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &e)| e);
        (
            mask,
            Graph::new(n, edges).expect("enumerated endpoints are in range"),
        )
    })
}

/// Runs oracle → build → verify → extract → validate for one `(graph, k)`
/// work item.
pub fn pipeline_report(graph_id: u64, g: &Graph, k: usize) -> EquivalenceReport {
    let mut report = EquivalenceReport {
        graph_id,
        k,
        oracle_colorable: false,
        construction_succeeded: false,
        extraction_valid: false,
        colors_used: 0,
    };
    let Some(coloring) = min_coloring_oracle(g, k.max(1)) else {
        return report;
    };
    if coloring.color_count() > k {
        return report;
    }
    report.oracle_colorable = true;
    let Ok(h) = coloring_to_surjection(g, &coloring) else {
        return report;
    };
    report.construction_succeeded = h.verify().is_homomorphism() && h.induces_h1_isomorphism();
    if !report.construction_succeeded {
        return report;
    }
    let Ok(extracted) = surjection_to_coloring(&h) else {
        return report;
    };
    report.extraction_valid = validate_coloring(g, &extracted).unwrap_or(false);
    report.colors_used = extracted.color_count();
    report
}

/// Exhaustive equivalence check over every labeled graph on exactly `n`
/// vertices and every `k` in the range: oracle k-colorability must coincide
/// with pipeline success. Reports are ordered by `(graph_id, k)`.
pub fn equivalence_harness(
    n: usize,
    k_range: RangeInclusive<usize>,
) -> Result<Vec<EquivalenceReport>, HarnessError> {
    equivalence_harness_with_bound(n, k_range, DEFAULT_EXHAUSTIVE_BOUND)
}

/// [`equivalence_harness`] with an explicit exhaustive bound.
pub fn equivalence_harness_with_bound(
    n: usize,
    k_range: RangeInclusive<usize>,
    bound: usize,
) -> Result<Vec<EquivalenceReport>, HarnessError> {
    if n > bound {
        return Err(HarnessError::BoundExceeded { n, bound });
    }
    let mut reports = Vec::new();
    for (graph_id, g) in labeled_graphs(n) {
        for k in k_range.clone() {
            reports.push(pipeline_report(graph_id, &g, k));
        }
    }
    Ok(reports)
}

/// Formats a harness run as CSV with a trailing counterexample count.
pub fn harness_csv(reports: &[EquivalenceReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", EquivalenceReport::CSV_HEADER);
    for r in reports {
        let _ = writeln!(out, "{}", r.to_csv_row());
    }
    let counterexamples = reports.iter().filter(|r| r.is_counterexample()).count();
    let _ = writeln!(out, "counterexamples: {counterexamples}");
    out
}
