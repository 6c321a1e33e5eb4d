//! Seeded instance generation: planted colorable graphs, Nielsen scrambling
//! of homomorphisms, vertex relabeling, and the extraction timing harness.
//!
//! Scrambling post-composes the homomorphism with factor-wise free-group
//! automorphisms and relabels the vertices. Neither operation changes whether
//! extraction succeeds: an elementary Nielsen move is a column operation of
//! determinant ±1 on the abelianization matrix (within one block), and a
//! relabeling is a row permutation. What scrambling does change is how
//! complicated the image words look, which is the point — extraction must not
//! care.

use std::time::{Duration, Instant};

use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::freegroup::{FreeWord, ProductElement, ProductShape, Syllable};
use crate::graph::{validate_coloring, Coloring, Graph};
use crate::hom::Homomorphism;
use crate::reduction::{coloring_to_surjection, surjection_to_coloring};

/// An elementary automorphism of one free factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NielsenMove {
    /// `x_g ↦ x_g⁻¹` in the given factor.
    Invert { factor: usize, generator: usize },
    /// `x_g ↦ x_g · x_b` in the given factor, `g ≠ b`.
    RightMultiply {
        factor: usize,
        generator: usize,
        by: usize,
    },
}

fn substitute(word: &FreeWord, mv: NielsenMove) -> FreeWord {
    let rank = word.rank();
    let syllables: Vec<Syllable> = match mv {
        NielsenMove::Invert { generator, .. } => word
            .syllables()
            .iter()
            .map(|s| {
                if s.generator == generator {
                    Syllable::new(s.generator, -s.exponent.clone())
                } else {
                    s.clone()
                }
            })
            .collect(),
        NielsenMove::RightMultiply { generator, by, .. } => {
            let mut out = Vec::new();
            for s in word.syllables() {
                if s.generator != generator {
                    out.push(s.clone());
                    continue;
                }
                let reps = s
                    .exponent
                    .abs()
                    .to_u64()
                    .expect("exponent small enough to expand");
                // (x_g x_b)^e, spelled out letter by letter.
                for _ in 0..reps {
                    if s.exponent.is_negative() {
                        out.push(Syllable::new(by, -1));
                        out.push(Syllable::new(generator, -1));
                    } else {
                        out.push(Syllable::new(generator, 1));
                        out.push(Syllable::new(by, 1));
                    }
                }
            }
            out
        }
    };
    FreeWord::from_syllables(rank, syllables).expect("substitution preserves the rank")
}

/// Applies one move to every image of the homomorphism; this is
/// post-composition with the corresponding automorphism of the product.
pub fn apply_nielsen_move(h: &Homomorphism, mv: NielsenMove) -> Homomorphism {
    let factor = match mv {
        NielsenMove::Invert { factor, .. } | NielsenMove::RightMultiply { factor, .. } => factor,
    };
    let images = h
        .images()
        .iter()
        .map(|w| {
            w.with_component(factor, substitute(w.component(factor), mv))
                .expect("substitution preserves the rank")
        })
        .collect();
    Homomorphism::new(h.graph().clone(), h.shape().clone(), images)
        .expect("scrambling preserves the structure")
}

fn random_move(shape: &ProductShape, rng: &mut impl Rng) -> NielsenMove {
    let factor = rng.gen_range(0..shape.factor_count());
    let rank = shape.ranks()[factor];
    if rank == 1 || rng.gen_ratio(1, 3) {
        NielsenMove::Invert {
            factor,
            generator: rng.gen_range(0..rank),
        }
    } else {
        let generator = rng.gen_range(0..rank);
        let mut by = rng.gen_range(0..rank - 1);
        if by >= generator {
            by += 1;
        }
        NielsenMove::RightMultiply {
            factor,
            generator,
            by,
        }
    }
}

/// Applies `move_count` random factor-wise Nielsen moves, seeded.
pub fn scramble_homomorphism(h: &Homomorphism, move_count: usize, seed: u64) -> Homomorphism {
    assert!(
        h.shape().factor_count() > 0,
        "cannot scramble the empty homomorphism"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = h.clone();
    for _ in 0..move_count {
        out = apply_nielsen_move(&out, random_move(out.shape(), &mut rng));
    }
    out
}

/// Relabels the vertices by a seeded random permutation: edges move with the
/// labels and the image list is permuted to match.
pub fn relabel_vertices(h: &Homomorphism, seed: u64) -> Homomorphism {
    let n = h.graph().vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let edges = h.graph().edges().map(|(u, v)| (perm[u], perm[v]));
    let graph = Graph::new(n, edges).expect("permuted endpoints are in range");
    let mut images = vec![ProductElement::identity(h.shape().clone()); n];
    for v in 0..n {
        images[perm[v]] = h.image(v).clone();
    }
    Homomorphism::new(graph, h.shape().clone(), images).expect("relabeling preserves the structure")
}

/// A k-partite random graph with its planted proper coloring: vertices are
/// assigned classes round-robin and only cross-class pairs may become edges,
/// each independently with probability `p`. Colorable by construction, so no
/// search is needed even at sizes the exhaustive oracle cannot touch.
pub fn planted_colorable_graph(n: usize, k: usize, p: f64, seed: u64) -> (Graph, Coloring) {
    assert!(k >= 1 && k <= n.max(1), "need 1 <= k <= n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors: Vec<usize> = (0..n).map(|v| v % k + 1).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if colors[u] != colors[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::new(n, edges).expect("generated endpoints are in range");
    let coloring = Coloring::new(colors, k).expect("planted colors are in range");
    (graph, coloring)
}

/// One timing row of the extraction benchmark.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub instances: usize,
    pub median: Duration,
}

/// Number of Nielsen moves the benchmark applies per instance.
pub const BENCH_SCRAMBLE_MOVES: usize = 50;

/// Times `surjection_to_coloring` on seeded scrambled instances. Per size:
/// plant a 4-colorable graph, build the homomorphism, scramble and relabel
/// it, then measure extraction alone. Instances are generated identically for
/// a given seed, so runs are reproducible; timing is strictly sequential.
pub fn bench_extraction(sizes: &[usize], instances: usize, seed: u64) -> Vec<BenchRow> {
    assert!(instances >= 1, "need at least one instance per size");
    let mut rows = Vec::with_capacity(sizes.len());
    for (si, &n) in sizes.iter().enumerate() {
        let k = 4.min(n);
        let mut times = Vec::with_capacity(instances);
        for inst in 0..instances {
            let sub_seed = seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((si * 1009 + inst) as u64);
            let (g, c) = planted_colorable_graph(n, k, 0.15, sub_seed);
            let h = coloring_to_surjection(&g, &c).expect("planted coloring is proper");
            let h = scramble_homomorphism(&h, BENCH_SCRAMBLE_MOVES, sub_seed ^ 0xA5A5);
            let h = relabel_vertices(&h, sub_seed ^ 0x5A5A);
            let start = Instant::now();
            let extracted = surjection_to_coloring(&h).expect("scrambled instance extracts");
            let elapsed = start.elapsed();
            assert!(
                validate_coloring(h.graph(), &extracted).expect("lengths match"),
                "extracted coloring must be proper"
            );
            assert!(extracted.color_count() <= k);
            times.push(elapsed);
        }
        times.sort();
        rows.push(BenchRow {
            n,
            instances,
            median: times[times.len() / 2],
        });
    }
    rows
}
