//! Exact rational matrix kernel: determinant, rank, and the constructive
//! block row selection that drives coloring extraction.
//!
//! Rank and determinant decisions feed directly into coloring correctness, so
//! everything here is exact: entries are arbitrary-precision rationals,
//! elimination is fraction-free (Bareiss) over the integers after row
//! scaling, and no floating point appears anywhere. Internal full-rank checks
//! may take a fast modular path, but only in the certifying direction — a
//! nonzero minor mod p proves a nonzero minor over ℚ — and fall back to exact
//! elimination otherwise, so every returned value equals the exact one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::freegroup::ProductShape;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols} but the shape expects {expected}x{expected}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("matrix is singular")]
    Singular,
    #[error("block row selection exhausted its search space on a nonsingular matrix")]
    SearchExhausted,
    #[error("matrix text: {0}")]
    BadText(String),
}

/// A dense matrix over ℚ. Entries are kept in lowest terms with positive
/// denominators (the rational type normalizes on construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match dimensions");
        RationalMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| {
            BigRational::from_integer(BigInt::from(rows[i][j]))
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, row: usize, col: usize) -> &BigRational {
        &self.data[row * self.cols + col]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    /// Integer rows obtained by scaling each row by the (positive) lcm of its
    /// denominators. Row scaling preserves the rank of every row subset; the
    /// scale factors are returned alongside for determinant bookkeeping.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut out = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut scale = BigInt::one();
            for j in 0..self.cols {
                scale = scale.lcm(self.at(i, j).denom());
            }
            let row = (0..self.cols)
                .map(|j| {
                    let e = self.at(i, j);
                    e.numer() * (&scale / e.denom())
                })
                .collect();
            out.push(row);
            scales.push(scale);
        }
        (out, scales)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<BigRational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (int_rows, scales) = self.integer_rows();
        let d = bareiss_det(int_rows);
        let scale = scales.into_iter().fold(BigInt::one(), |a, b| a * b);
        Ok(BigRational::new(d, scale))
    }

    /// Exact rank over ℚ.
    pub fn rank(&self) -> usize {
        let (int_rows, _) = self.integer_rows();
        fraction_free_rank(int_rows)
    }

    /// Debug text format: one line per row, entries space-separated, each an
    /// integer or `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LinalgError> {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<BigRational> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse()
                        .map_err(|e| LinalgError::BadText(format!("{tok:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::BadText("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }
}

/// Fraction-free determinant. Intermediate values are minors of the input, so
/// every division is exact when the input is integral; this is asserted.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero());
        let Some(pivot) = pivot else {
            return BigInt::zero();
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "fraction-free elimination lost integrality");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if negate {
        -det
    } else {
        det
    }
}

/// Fraction-free row echelon rank for rectangular integer matrices. Pivot
/// columns may be skipped; divisions stay exact (and are asserted).
fn fraction_free_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&i| !m[i][col].is_zero());
        let Some(pivot) = pivot else {
            continue;
        };
        m.swap(pivot, rank);
        for i in (rank + 1)..rows {
            for j in (col + 1)..cols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "fraction-free elimination lost integrality");
                m[i][j] = q;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Incremental fraction-free echelon over a fixed column window; used to keep
/// the per-block independence test cheap during the row-selection search.
/// Rows are pushed and popped in stack order, which keeps the Bareiss pivot
/// chain consistent.
struct IncrementalEchelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    pivots: Vec<BigInt>, // pivots[l] = leading entry of rows[l]
}

impl IncrementalEchelon {
    fn new() -> Self {
        IncrementalEchelon {
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Reduces `row` against the current echelon. Returns the reduced row if
    /// it is independent of the stack, `None` if it reduces to zero.
    fn reduce(&self, mut row: Vec<BigInt>) -> Option<Vec<BigInt>> {
        for l in 0..self.rows.len() {
            let coeff = row[self.pivot_cols[l]].clone();
            let denom = if l == 0 {
                BigInt::one()
            } else {
                self.pivots[l - 1].clone()
            };
            for (entry, basis_entry) in row.iter_mut().zip(&self.rows[l]) {
                let num = &self.pivots[l] * &*entry - &coeff * basis_entry;
                let (q, r) = num.div_rem(&denom);
                assert!(r.is_zero(), "fraction-free elimination lost integrality");
                *entry = q;
            }
        }
        if row.iter().all(Zero::is_zero) {
            None
        } else {
            Some(row)
        }
    }

    fn push(&mut self, row: Vec<BigInt>) {
        let pivot_col = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("pushed row must be nonzero");
        self.pivots.push(row[pivot_col].clone());
        self.pivot_cols.push(pivot_col);
        self.rows.push(row);
    }

    fn pop(&mut self) {
        self.rows.pop();
        self.pivot_cols.pop();
        self.pivots.pop();
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Word-sized arithmetic modulo the Mersenne prime 2^61 - 1, used as a
/// one-sided certificate: full rank mod p implies full rank over ℚ.
mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    pub const P: u64 = (1 << 61) - 1;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn inv(a: u64) -> u64 {
        // Fermat: a^(P-2) mod P.
        let mut base = a;
        let mut exp = P - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn residue(x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(P))
            .to_u64()
            .expect("mod_floor result fits u64")
    }

    /// Determinant mod p by Gaussian elimination.
    pub fn det(mut m: Vec<Vec<u64>>) -> u64 {
        let n = m.len();
        let mut det = 1u64;
        for k in 0..n {
            let Some(pivot) = (k..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            if pivot != k {
                m.swap(pivot, k);
                det = sub(0, det);
            }
            det = mul(det, m[k][k]);
            let piv_inv = inv(m[k][k]);
            let (top, rest) = m.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in rest {
                if row[k] == 0 {
                    continue;
                }
                let factor = mul(row[k], piv_inv);
                for (entry, &pivot_entry) in row.iter_mut().zip(pivot_row).skip(k) {
                    *entry = sub(*entry, mul(factor, pivot_entry));
                }
            }
        }
        det
    }

    /// Reduces `row` against an echelon basis in place; returns true when a
    /// nonzero residual remains. On true, `row` is normalized to a leading 1
    /// and `pivot_col` records its pivot.
    pub fn reduce_row(
        row: &mut [u64],
        basis: &[Vec<u64>],
        pivot_cols: &[usize],
    ) -> Option<usize> {
        for (b, &pc) in basis.iter().zip(pivot_cols) {
            let coeff = row[pc];
            if coeff == 0 {
                continue;
            }
            for (entry, &basis_entry) in row.iter_mut().zip(b) {
                *entry = sub(*entry, mul(coeff, basis_entry));
            }
        }
        let pivot_col = row.iter().position(|&x| x != 0)?;
        let piv_inv = inv(row[pivot_col]);
        for x in row.iter_mut() {
            *x = mul(*x, piv_inv);
        }
        Some(pivot_col)
    }
}

/// A partition of the row indices `[0, n)` into blocks `J_1, …, J_k` with
/// `|J_i| = m_i`, produced by [`select_block_rows`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRowPartition {
    blocks: Vec<Vec<usize>>,
    shape: ProductShape,
}

impl BlockRowPartition {
    /// Rows of block `i`, ascending.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn shape(&self) -> &ProductShape {
        &self.shape
    }

    /// Maps each row index to its block index.
    pub fn block_assignment(&self) -> Vec<usize> {
        let n = self.shape.total();
        let mut assignment = vec![usize::MAX; n];
        for (i, block) in self.blocks.iter().enumerate() {
            for &row in block {
                assignment[row] = i;
            }
        }
        assignment
    }
}

/// True exactly when deleting the `chosen` rows and the first `block_cols`
/// columns of `m` leaves a matrix whose rank equals its column count — i.e.
/// the remaining rows still span the full remaining column space. This is the
/// completion condition that prunes the row-selection search.
pub fn principal_completion_check(m: &RationalMatrix, chosen: &[usize], block_cols: usize) -> bool {
    assert!(block_cols <= m.cols(), "block wider than the matrix");
    assert!(chosen.iter().all(|&r| r < m.rows()), "row index out of range");
    let (int_rows, _) = m.integer_rows();
    let kept: Vec<Vec<BigInt>> = (0..m.rows())
        .filter(|r| !chosen.contains(r))
        .map(|r| int_rows[r][block_cols..].to_vec())
        .collect();
    let want = m.cols() - block_cols;
    fraction_free_rank(kept) == want
}

/// Selects disjoint row sets `J_1, …, J_k` covering all rows of a
/// nonsingular `n×n` matrix so that for every `i` the rows `J_i` of column
/// block `i` have full rank `m_i`.
///
/// The search is depth-first over rows in ascending order with two exact
/// pruning predicates per partial choice: the chosen rows must stay
/// independent on the current block columns, and deleting them must leave the
/// later columns at full rank (the completion condition, which guarantees the
/// next stage starts from a nonsingular square matrix). Nonsingularity makes
/// the search total; the result is the lexicographically least feasible `J_1`,
/// then the least feasible `J_2` given `J_1`, and so on, so the output is
/// reproducible bit for bit.
pub fn select_block_rows(
    m: &RationalMatrix,
    shape: &ProductShape,
) -> Result<BlockRowPartition, LinalgError> {
    let n = shape.total();
    if m.rows() != n || m.cols() != n {
        return Err(LinalgError::ShapeMismatch {
            rows: m.rows(),
            cols: m.cols(),
            expected: n,
        });
    }
    let (int_rows, _) = m.integer_rows();
    if !nonsingular_certified(&int_rows) {
        return Err(LinalgError::Singular);
    }

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::with_capacity(shape.factor_count());
    let mut col_off = 0;
    for &m_i in shape.ranks() {
        let chosen = select_stage(&int_rows, &remaining, col_off, m_i, n)
            .ok_or(LinalgError::SearchExhausted)?;
        remaining.retain(|r| !chosen.contains(r));
        blocks.push(chosen);
        col_off += m_i;
    }
    Ok(BlockRowPartition {
        blocks,
        shape: shape.clone(),
    })
}

fn nonsingular_certified(int_rows: &[Vec<BigInt>]) -> bool {
    let residues: Vec<Vec<u64>> = int_rows
        .iter()
        .map(|row| row.iter().map(modp::residue).collect())
        .collect();
    if modp::det(residues) != 0 {
        return true; // nonzero mod p certifies nonzero over ℚ
    }
    !bareiss_det(int_rows.to_vec()).is_zero()
}

/// One stage of the selection: the lexicographically least `chosen ⊆
/// remaining` of size `m_i` whose rows are independent on the block columns
/// and whose removal keeps the later columns at full rank.
fn select_stage(
    int_rows: &[Vec<BigInt>],
    remaining: &[usize],
    col_off: usize,
    m_i: usize,
    n: usize,
) -> Option<Vec<usize>> {
    let later_off = col_off + m_i;

    // A row basis of the later columns drawn from high indices: any partial
    // choice disjoint from it passes the completion check for free, because
    // the basis survives the deletion. Choices that do intersect it fall back
    // to an exact rank computation.
    let basis = completion_basis(int_rows, remaining, later_off, n - later_off)?;
    let mut in_basis = vec![false; n];
    for &r in &basis {
        in_basis[r] = true;
    }

    let mut search = StageSearch {
        int_rows,
        remaining,
        block_cols: col_off..later_off,
        later_off,
        later_count: n - later_off,
        in_basis,
        m_i,
        chosen: Vec::with_capacity(m_i),
        echelon: IncrementalEchelon::new(),
        basis_overlap: 0,
    };
    if search.dfs(0) {
        Some(search.chosen)
    } else {
        None
    }
}

struct StageSearch<'a> {
    int_rows: &'a [Vec<BigInt>],
    remaining: &'a [usize],
    block_cols: std::ops::Range<usize>,
    later_off: usize,
    later_count: usize,
    in_basis: Vec<bool>,
    m_i: usize,
    chosen: Vec<usize>,
    echelon: IncrementalEchelon,
    basis_overlap: usize,
}

impl StageSearch<'_> {
    fn dfs(&mut self, start: usize) -> bool {
        if self.echelon.len() == self.m_i {
            return true;
        }
        // Leave room for the rows still needed after this one.
        let needed = self.m_i - self.echelon.len();
        for idx in start..=self.remaining.len().saturating_sub(needed) {
            let row = self.remaining[idx];
            let slice = self.int_rows[row][self.block_cols.clone()].to_vec();
            if slice.iter().all(Zero::is_zero) {
                continue;
            }
            let Some(reduced) = self.echelon.reduce(slice) else {
                continue;
            };
            self.chosen.push(row);
            if self.in_basis[row] {
                self.basis_overlap += 1;
            }
            let completion_ok = self.basis_overlap == 0
                || exact_completion_rank(self.int_rows, self.remaining, &self.chosen, self.later_off)
                    == self.later_count;
            if completion_ok {
                self.echelon.push(reduced);
                if self.dfs(idx + 1) {
                    return true;
                }
                self.echelon.pop();
            }
            if self.in_basis[row] {
                self.basis_overlap -= 1;
            }
            self.chosen.pop();
        }
        false
    }
}

/// A set of `later_count` rows of `remaining` that has full rank on the
/// columns from `later_off` on, preferring high row indices. `None` when the
/// later columns are rank-deficient on `remaining`, in which case no
/// completion exists at all.
fn completion_basis(
    int_rows: &[Vec<BigInt>],
    remaining: &[usize],
    later_off: usize,
    later_count: usize,
) -> Option<Vec<usize>> {
    if later_count == 0 {
        return Some(Vec::new());
    }
    // Fast path: build the basis mod p. Reaching full size certifies it.
    let mut basis_rows: Vec<Vec<u64>> = Vec::with_capacity(later_count);
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(later_count);
    let mut basis: Vec<usize> = Vec::with_capacity(later_count);
    for &row in remaining.iter().rev() {
        let mut residues: Vec<u64> = int_rows[row][later_off..]
            .iter()
            .map(modp::residue)
            .collect();
        if let Some(pc) = modp::reduce_row(&mut residues, &basis_rows, &pivot_cols) {
            basis_rows.push(residues);
            pivot_cols.push(pc);
            basis.push(row);
            if basis.len() == later_count {
                return Some(basis);
            }
        }
    }
    // The prime may have hidden rank; settle it exactly.
    let mut echelon = IncrementalEchelon::new();
    let mut basis: Vec<usize> = Vec::with_capacity(later_count);
    for &row in remaining.iter().rev() {
        if let Some(reduced) = echelon.reduce(int_rows[row][later_off..].to_vec()) {
            echelon.push(reduced);
            basis.push(row);
            if basis.len() == later_count {
                return Some(basis);
            }
        }
    }
    None
}

fn exact_completion_rank(
    int_rows: &[Vec<BigInt>],
    remaining: &[usize],
    chosen: &[usize],
    later_off: usize,
) -> usize {
    let kept: Vec<Vec<BigInt>> = remaining
        .iter()
        .filter(|r| !chosen.contains(r))
        .map(|&r| int_rows[r][later_off..].to_vec())
        .collect();
    fraction_free_rank(kept)
}
