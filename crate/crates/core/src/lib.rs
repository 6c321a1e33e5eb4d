//! Graph coloring through right-angled Artin groups.
//!
//! A finite simplicial graph `Γ` is k-colorable exactly when its right-angled
//! Artin group `A(Γ)` admits a surjection onto a direct product of k free
//! groups whose ranks sum to the number of vertices. This crate makes both
//! directions of that equivalence executable:
//!
//! * [`reduction::coloring_to_surjection`] turns a proper coloring into an
//!   explicit homomorphism `A(Γ) → F_1 × ⋯ × F_k` given on generators, and
//! * [`reduction::surjection_to_coloring`] recovers a proper coloring from any
//!   homomorphism that satisfies the edge relations and induces an
//!   isomorphism on first rational homology, using exact rational linear
//!   algebra throughout.
//!
//! Everything rank- or determinant-shaped is computed over ℚ with
//! arbitrary-precision integers; no floating point is involved anywhere in
//! the decision path. A brute-force coloring search
//! ([`graph::min_coloring_oracle`]) serves as the independent ground truth for
//! the test suite and the exhaustive small-graph harness
//! ([`reduction::equivalence_harness`]).

pub mod freegroup;
pub mod graph;
pub mod hom;
pub mod instances;
pub mod linalg;
pub mod reduction;

pub use freegroup::{FreeWord, ProductElement, ProductShape, Syllable};
pub use graph::{Coloring, Graph};
pub use hom::Homomorphism;
pub use linalg::{BlockRowPartition, RationalMatrix};
