//! Independent oracles and generators shared by the integration suites.
//!
//! Everything here deliberately avoids the library's computation paths:
//! determinants come from cofactor expansion, ranks from plain rational
//! Gaussian elimination, word reduction from a letter-by-letter stack, and
//! the block-row oracle from generate-and-test over partitions.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use raagcolor::freegroup::{FreeWord, ProductElement, ProductShape, Syllable};
use raagcolor::linalg::RationalMatrix;

// ---------------------------------------------------------------------------
// Exact linear algebra, the slow and obvious way
// ---------------------------------------------------------------------------

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &RationalMatrix) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigRational::one();
    }
    if n == 1 {
        return m.at(0, 0).clone();
    }
    let mut acc = BigRational::zero();
    for j in 0..n {
        if m.at(0, j).is_zero() {
            continue;
        }
        let minor = RationalMatrix::from_fn(n - 1, n - 1, |r, c| {
            m.at(r + 1, if c < j { c } else { c + 1 }).clone()
        });
        let term = m.at(0, j) * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Rank by textbook rational row reduction with division.
pub fn echelon_rank(m: &RationalMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.at(i, j).clone()).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(pivot, rank);
        let pivot_row = a[rank].clone();
        for r in a.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let factor = &r[col] / &pivot_row[col];
            for (entry, pivot_entry) in r.iter_mut().zip(&pivot_row).skip(col) {
                *entry -= &factor * pivot_entry;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The submatrix picked out by explicit row indices and a column range.
pub fn submatrix(
    m: &RationalMatrix,
    rows: &[usize],
    cols: std::ops::Range<usize>,
) -> RationalMatrix {
    RationalMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        m.at(rows[i], cols.start + j).clone()
    })
}

// ---------------------------------------------------------------------------
// Exhaustive block-row-partition oracle
// ---------------------------------------------------------------------------

/// All `size`-subsets of `pool` in lexicographic order.
pub fn combinations(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let needed = size - cur.len();
        for i in start..=pool.len().saturating_sub(needed) {
            cur.push(pool[i]);
            go(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= pool.len() {
        go(pool, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Checks the stage conditions for a full partition: for every block `i`, the
/// chosen rows restricted to block `i`'s columns have full rank, and the rows
/// left over after stages `1..=i` keep the later columns at full rank.
pub fn stage_conditions_hold(
    m: &RationalMatrix,
    shape: &ProductShape,
    partition: &[Vec<usize>],
) -> bool {
    let n = shape.total();
    if partition.len() != shape.factor_count() {
        return false;
    }
    let mut used = vec![false; n];
    let mut col_off = 0;
    for (i, block) in partition.iter().enumerate() {
        let m_i = shape.ranks()[i];
        if block.len() != m_i || block.iter().any(|&r| used[r]) {
            return false;
        }
        if echelon_rank(&submatrix(m, block, col_off..col_off + m_i)) != m_i {
            return false;
        }
        for &r in block {
            used[r] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&r| !used[r]).collect();
        if echelon_rank(&submatrix(m, &rest, col_off + m_i..n)) != n - col_off - m_i {
            return false;
        }
        col_off += m_i;
    }
    true
}

/// Generate-and-test over partitions in lexicographic block order; returns
/// the first one whose stage conditions all hold.
pub fn first_feasible_partition(
    m: &RationalMatrix,
    shape: &ProductShape,
) -> Option<Vec<Vec<usize>>> {
    fn go(
        m: &RationalMatrix,
        shape: &ProductShape,
        stage: usize,
        col_off: usize,
        remaining: &[usize],
        acc: &mut Vec<Vec<usize>>,
    ) -> bool {
        if stage == shape.factor_count() {
            return true;
        }
        let m_i = shape.ranks()[stage];
        let n = shape.total();
        for candidate in combinations(remaining, m_i) {
            if echelon_rank(&submatrix(m, &candidate, col_off..col_off + m_i)) != m_i {
                continue;
            }
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|r| !candidate.contains(r))
                .collect();
            if echelon_rank(&submatrix(m, &rest, col_off + m_i..n)) != n - col_off - m_i {
                continue;
            }
            acc.push(candidate);
            if go(m, shape, stage + 1, col_off + m_i, &rest, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    let remaining: Vec<usize> = (0..shape.total()).collect();
    if go(m, shape, 0, 0, &remaining, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Random matrices and shapes
// ---------------------------------------------------------------------------

pub fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    RationalMatrix::from_integer_rows(&data)
}

/// Resamples integer matrices with entries in `[-5, 5]` until one is
/// invertible, judged by the independent rank oracle.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    loop {
        let m = random_int_matrix(rng, n, n, 5);
        if echelon_rank(&m) == n {
            return m;
        }
    }
}

/// A uniform-ish random composition of `n` into parts of size at least 1.
pub fn random_shape(rng: &mut impl Rng, n: usize) -> ProductShape {
    assert!(n >= 1);
    let k = rng.gen_range(1..=n);
    // k - 1 distinct cut points inside [1, n).
    let mut cuts = Vec::with_capacity(k + 1);
    cuts.push(0);
    while cuts.len() < k {
        let c = rng.gen_range(1..n.max(2));
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.push(n);
    cuts.sort_unstable();
    let ranks: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    ProductShape::new(ranks).expect("parts are nonzero")
}

// ---------------------------------------------------------------------------
// Free-group helpers and the letter-level reducer
// ---------------------------------------------------------------------------

pub fn random_word(rng: &mut impl Rng, rank: usize, max_syllables: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_syllables);
    let syllables: Vec<Syllable> = (0..len)
        .map(|_| {
            let exp = loop {
                let e: i64 = rng.gen_range(-3..=3);
                if e != 0 {
                    break e;
                }
            };
            Syllable::new(rng.gen_range(0..rank), exp)
        })
        .collect();
    FreeWord::from_syllables(rank, syllables).expect("generators are in range")
}

pub fn random_product_element(
    rng: &mut impl Rng,
    shape: &ProductShape,
    max_syllables: usize,
) -> ProductElement {
    let components = shape
        .ranks()
        .iter()
        .map(|&rank| random_word(rng, rank, max_syllables))
        .collect();
    ProductElement::new(shape.clone(), components).expect("ranks match")
}

/// A pair that commutes by construction: in each factor both entries are
/// conjugated powers of one shared root, `c r^p c⁻¹` and `c r^q c⁻¹`.
pub fn commuting_pair(
    rng: &mut impl Rng,
    shape: &ProductShape,
) -> (ProductElement, ProductElement) {
    let mut left = Vec::with_capacity(shape.factor_count());
    let mut right = Vec::with_capacity(shape.factor_count());
    for &rank in shape.ranks() {
        let root = random_word(rng, rank, 3);
        let conjugator = random_word(rng, rank, 2);
        let p: i64 = rng.gen_range(-3..=3);
        let q: i64 = rng.gen_range(-3..=3);
        let conj = |power: i64| {
            conjugator
                .multiply(&root.pow(power))
                .unwrap()
                .multiply(&conjugator.inverse())
                .unwrap()
        };
        left.push(conj(p));
        right.push(conj(q));
    }
    (
        ProductElement::new(shape.clone(), left).unwrap(),
        ProductElement::new(shape.clone(), right).unwrap(),
    )
}

/// Expands a word into single letters `(generator, ±1)`.
pub fn letters(w: &FreeWord) -> Vec<(usize, i8)> {
    let mut out = Vec::new();
    for s in w.syllables() {
        let e: i64 = i64::try_from(&s.exponent).expect("test exponents are small");
        let sign: i8 = if e < 0 { -1 } else { 1 };
        for _ in 0..e.unsigned_abs() {
            out.push((s.generator, sign));
        }
    }
    out
}

/// Letter-by-letter stack reduction.
pub fn reduce_letters(seq: impl IntoIterator<Item = (usize, i8)>) -> Vec<(usize, i8)> {
    let mut stack: Vec<(usize, i8)> = Vec::new();
    for (g, s) in seq {
        match stack.last() {
            Some(&(tg, ts)) if tg == g && ts == -s => {
                stack.pop();
            }
            _ => stack.push((g, s)),
        }
    }
    stack
}

fn inverse_letters(seq: &[(usize, i8)]) -> Vec<(usize, i8)> {
    seq.iter().rev().map(|&(g, s)| (g, -s)).collect()
}

/// Commutator triviality decided entirely at the letter level.
pub fn naive_commutator_is_trivial(u: &FreeWord, v: &FreeWord) -> bool {
    let lu = letters(u);
    let lv = letters(v);
    let word = lu
        .iter()
        .chain(lv.iter())
        .copied()
        .chain(inverse_letters(&lu))
        .chain(inverse_letters(&lv))
        .collect::<Vec<_>>();
    reduce_letters(word).is_empty()
}

/// Product-level commutator triviality via the letter reducer.
pub fn naive_product_commutes(a: &ProductElement, b: &ProductElement) -> bool {
    a.components()
        .iter()
        .zip(b.components())
        .all(|(u, v)| naive_commutator_is_trivial(u, v))
}

/// Converts a library word to the reduced letter sequence; used to cross-check
/// syllable-level multiplication against the stack reducer.
pub fn as_letters(w: &FreeWord) -> Vec<(usize, i8)> {
    reduce_letters(letters(w))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
