//! Homomorphisms from a graph's right-angled Artin group to a product of
//! free groups, given by their values on the vertex generators.
//!
//! The graph presents the group: one generator per vertex, one commutation
//! relation per edge, and nothing else. A candidate map on generators
//! therefore extends to a homomorphism exactly when the images of adjacent
//! vertices commute; [`Homomorphism::verify`] checks precisely the edges and
//! reports the ones that fail.
//!
//! Whether the map is "big enough" for coloring extraction is a separate,
//! weaker condition than surjectivity: the induced map on first rational
//! homology must be an isomorphism, i.e. the abelianization matrix must have
//! nonzero determinant ([`Homomorphism::induces_h1_isomorphism`]).

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{FreeWord, ProductElement, ProductShape, WordError};
use crate::graph::{Graph, GraphError};
use crate::linalg::RationalMatrix;

/// Structural errors: the pieces of a homomorphism do not fit together.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("graph has {vertices} vertices but {images} images were given")]
    ImageCountMismatch { vertices: usize, images: usize },
    #[error("shape total {shape_total} does not equal the vertex count {vertices}")]
    ShapeTotalMismatch { shape_total: usize, vertices: usize },
    #[error("image of vertex {vertex} does not have the product shape")]
    ImageShapeMismatch { vertex: usize },
}

/// Errors from reading a homomorphism file.
#[derive(Debug, Error)]
pub enum HomParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad graph: {0}")]
    Graph(#[from] GraphError),
    #[error("bad shape or word: {0}")]
    Word(#[from] WordError),
    #[error("vertex {vertex}: expected {expected} component words, found {found}")]
    ComponentCount {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Structure(#[from] HomError),
}

/// Result of checking the defining relations: the edges whose endpoint
/// images fail to commute. Empty means the map extends to a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    failing_edges: Vec<(usize, usize)>,
}

impl VerificationReport {
    pub fn is_homomorphism(&self) -> bool {
        self.failing_edges.is_empty()
    }

    pub fn failing_edges(&self) -> &[(usize, usize)] {
        &self.failing_edges
    }
}

/// A map `A(Γ) → F_1 × ⋯ × F_k` described by the images `w_i` of the vertex
/// generators. Only structure is checked at construction; use
/// [`Homomorphism::verify`] for the edge relations.
///
/// Two homomorphisms are equal when their image sequences are equal as
/// reduced words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    graph: Graph,
    shape: ProductShape,
    images: Vec<ProductElement>,
}

#[derive(Serialize, Deserialize)]
struct HomFile {
    n: usize,
    edges: Vec<(usize, usize)>,
    ranks: Vec<usize>,
    images: Vec<Vec<String>>,
}

impl Homomorphism {
    pub fn new(
        graph: Graph,
        shape: ProductShape,
        images: Vec<ProductElement>,
    ) -> Result<Self, HomError> {
        let n = graph.vertex_count();
        if images.len() != n {
            return Err(HomError::ImageCountMismatch {
                vertices: n,
                images: images.len(),
            });
        }
        if shape.total() != n {
            return Err(HomError::ShapeTotalMismatch {
                shape_total: shape.total(),
                vertices: n,
            });
        }
        if let Some(vertex) = images.iter().position(|w| w.shape() != &shape) {
            return Err(HomError::ImageShapeMismatch { vertex });
        }
        Ok(Homomorphism {
            graph,
            shape,
            images,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shape(&self) -> &ProductShape {
        &self.shape
    }

    pub fn images(&self) -> &[ProductElement] {
        &self.images
    }

    pub fn image(&self, vertex: usize) -> &ProductElement {
        &self.images[vertex]
    }

    /// Checks the defining relations: for every edge `{u, v}` the images
    /// `w_u, w_v` must commute in the product. Non-edges impose no relation
    /// and are not checked.
    pub fn verify(&self) -> VerificationReport {
        let failing_edges = self
            .graph
            .edges()
            .filter(|&(u, v)| {
                !self.images[u]
                    .commutes_with(&self.images[v])
                    .expect("images share a shape")
            })
            .collect();
        VerificationReport { failing_edges }
    }

    /// The integer matrix of the induced map on first homology: row `i` is
    /// the abelianized vector of `w_i`, columns follow the global generator
    /// order.
    pub fn abelianization_matrix(&self) -> RationalMatrix {
        let n = self.graph.vertex_count();
        let rows: Vec<Vec<_>> = self
            .images
            .iter()
            .map(ProductElement::abelianized_vector)
            .collect();
        RationalMatrix::from_fn(n, n, |i, j| BigRational::from_integer(rows[i][j].clone()))
    }

    /// True exactly when the abelianization matrix has nonzero determinant,
    /// i.e. the map induces an isomorphism on first rational homology. This
    /// is the hypothesis coloring extraction needs; it is deliberately weaker
    /// than surjectivity.
    pub fn induces_h1_isomorphism(&self) -> bool {
        !self
            .abelianization_matrix()
            .det()
            .expect("abelianization matrix is square")
            .is_zero()
    }

    /// Serializes to the JSON homomorphism file format. Deterministic: edges
    /// are sorted and words use their canonical spelling, so
    /// serialize ∘ parse ∘ serialize = serialize.
    pub fn to_json(&self) -> String {
        let file = HomFile {
            n: self.graph.vertex_count(),
            edges: self.graph.edges().collect(),
            ranks: self.shape.ranks().to_vec(),
            images: self
                .images
                .iter()
                .map(|w| w.components().iter().map(FreeWord::to_string).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, HomParseError> {
        let file: HomFile = serde_json::from_str(text)?;
        let graph = Graph::new(file.n, file.edges)?;
        let shape = ProductShape::new(file.ranks)?;
        let mut images = Vec::with_capacity(file.images.len());
        for (vertex, words) in file.images.iter().enumerate() {
            if words.len() != shape.factor_count() {
                return Err(HomParseError::ComponentCount {
                    vertex,
                    expected: shape.factor_count(),
                    found: words.len(),
                });
            }
            let components = words
                .iter()
                .zip(shape.ranks())
                .map(|(text, &rank)| FreeWord::parse(text, rank))
                .collect::<Result<Vec<_>, _>>()?;
            images.push(ProductElement::new(shape.clone(), components)?);
        }
        Ok(Homomorphism::new(graph, shape, images)?)
    }
}
