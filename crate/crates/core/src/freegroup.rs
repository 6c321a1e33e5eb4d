//! Reduced-word algebra for free groups and their direct products.
//!
//! Elements of a free group are kept in reduced run-length form: a sequence
//! of syllables `(generator, exponent)` with nonzero exponents and distinct
//! adjacent generators. This form is canonical, so two words represent the
//! same group element exactly when their syllable sequences are equal.
//! Exponents are arbitrary-precision integers.
//!
//! A [`ProductElement`] is a tuple `g = (g_1, …, g_k)` in a direct product
//! `F_1 × ⋯ × F_k` described by a [`ProductShape`]; the global generator
//! index of factor `i`'s generator `j` is `j + m_1 + ⋯ + m_{i-1}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors from word arithmetic, parsing, and product-element operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("unknown symbol {0:?} in word")]
    UnknownSymbol(String),
    #[error("bad exponent in atom {0:?}")]
    BadExponent(String),
    #[error("product shapes differ")]
    ShapeMismatch,
    #[error("factor {factor} has rank 0; every free factor must have rank at least 1")]
    ZeroRankFactor { factor: usize },
    #[error("expected {expected} components, found {found}")]
    ComponentCountMismatch { expected: usize, found: usize },
}

/// One run `generator^exponent` of a reduced word. `exponent` is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: BigInt,
}

impl Syllable {
    pub fn new(generator: usize, exponent: impl Into<BigInt>) -> Self {
        Syllable {
            generator,
            exponent: exponent.into(),
        }
    }
}

/// A reduced word in a free group of a fixed rank.
///
/// The empty syllable sequence is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    syllables: Vec<Syllable>,
}

fn push_reduced(stack: &mut Vec<Syllable>, generator: usize, exponent: BigInt) {
    if exponent.is_zero() {
        return;
    }
    if let Some(top) = stack.last_mut() {
        if top.generator == generator {
            top.exponent += exponent;
            if top.exponent.is_zero() {
                stack.pop();
            }
            return;
        }
    }
    stack.push(Syllable {
        generator,
        exponent,
    });
}

impl FreeWord {
    /// The identity of the free group of the given rank.
    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            syllables: Vec::new(),
        }
    }

    /// The word `x_index`.
    pub fn generator(rank: usize, index: usize) -> Result<Self, WordError> {
        if index >= rank {
            return Err(WordError::GeneratorOutOfRange { index, rank });
        }
        Ok(FreeWord {
            rank,
            syllables: vec![Syllable::new(index, 1)],
        })
    }

    /// Builds a word from raw syllables, reducing as it goes. Syllables may
    /// repeat generators or carry zero exponents; the result is reduced.
    pub fn from_syllables(
        rank: usize,
        syllables: impl IntoIterator<Item = Syllable>,
    ) -> Result<Self, WordError> {
        let mut stack = Vec::new();
        for s in syllables {
            if s.generator >= rank {
                return Err(WordError::GeneratorOutOfRange {
                    index: s.generator,
                    rank,
                });
            }
            push_reduced(&mut stack, s.generator, s.exponent);
        }
        Ok(FreeWord {
            rank,
            syllables: stack,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Reduced concatenation `self · other`.
    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch(self.rank, other.rank));
        }
        let mut stack = self.syllables.clone();
        for s in &other.syllables {
            push_reduced(&mut stack, s.generator, s.exponent.clone());
        }
        Ok(FreeWord {
            rank: self.rank,
            syllables: stack,
        })
    }

    /// The inverse word: syllables reversed with negated exponents.
    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -s.exponent.clone(),
                })
                .collect(),
        }
    }

    /// `self^e` for a machine-sized exponent.
    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = FreeWord::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            acc = acc.multiply(&base).expect("equal ranks");
        }
        acc
    }

    /// Sum of the exponents of `generator` across the word; the image under
    /// the homomorphism to ℤ sending that generator to 1 and the rest to 0.
    pub fn exp_sum(&self, generator: usize) -> Result<BigInt, WordError> {
        if generator >= self.rank {
            return Err(WordError::GeneratorOutOfRange {
                index: generator,
                rank: self.rank,
            });
        }
        Ok(self
            .syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| &s.exponent)
            .sum())
    }

    /// True exactly when the commutator `self · other · self⁻¹ · other⁻¹`
    /// reduces to the identity.
    pub fn commutes_with(&self, other: &FreeWord) -> Result<bool, WordError> {
        let commutator = self
            .multiply(other)?
            .multiply(&self.inverse())?
            .multiply(&other.inverse())?;
        Ok(commutator.is_identity())
    }

    /// Parses a word from whitespace-separated atoms `x<i>` or
    /// `x<i>^<signed-integer>`. The empty string is the identity.
    pub fn parse(text: &str, rank: usize) -> Result<FreeWord, WordError> {
        let mut stack = Vec::new();
        for atom in text.split_whitespace() {
            let body = atom
                .strip_prefix('x')
                .ok_or_else(|| WordError::UnknownSymbol(atom.to_string()))?;
            let (index_part, exponent) = match body.split_once('^') {
                Some((idx, exp)) => {
                    let e: BigInt = exp
                        .parse()
                        .map_err(|_| WordError::BadExponent(atom.to_string()))?;
                    (idx, e)
                }
                None => (body, BigInt::one()),
            };
            if index_part.is_empty() || !index_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(WordError::UnknownSymbol(atom.to_string()));
            }
            let index: usize = index_part
                .parse()
                .map_err(|_| WordError::UnknownSymbol(atom.to_string()))?;
            if index >= rank {
                return Err(WordError::GeneratorOutOfRange { index, rank });
            }
            push_reduced(&mut stack, index, exponent);
        }
        Ok(FreeWord {
            rank,
            syllables: stack,
        })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if s.exponent.is_one() {
                write!(f, "x{}", s.generator)?;
            } else {
                write!(f, "x{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

/// Ranks `(m_1, …, m_k)` of the free factors of a direct product
/// `F_1 × ⋯ × F_k`. Every factor has rank at least 1; the empty shape is the
/// degenerate product with no factors, used for the empty graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductShape {
    ranks: Vec<usize>,
}

impl ProductShape {
    pub fn new(ranks: Vec<usize>) -> Result<Self, WordError> {
        if let Some(factor) = ranks.iter().position(|&m| m == 0) {
            return Err(WordError::ZeroRankFactor { factor });
        }
        Ok(ProductShape { ranks })
    }

    /// Number of free factors k.
    pub fn factor_count(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Total rank `n = Σ m_i`, the number of global generators.
    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// First global generator index of factor `i`.
    pub fn block_start(&self, factor: usize) -> usize {
        self.ranks[..factor].iter().sum()
    }

    /// Global generator indices owned by factor `i`.
    pub fn block_range(&self, factor: usize) -> std::ops::Range<usize> {
        let start = self.block_start(factor);
        start..start + self.ranks[factor]
    }
}

/// An element `g = (g_1, …, g_k)` of a direct product of free groups.
///
/// The component decomposition of an element of the product is unique, so
/// component-wise equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductElement {
    shape: ProductShape,
    components: Vec<FreeWord>,
}

impl ProductElement {
    pub fn identity(shape: ProductShape) -> Self {
        let components = shape
            .ranks()
            .iter()
            .map(|&m| FreeWord::identity(m))
            .collect();
        ProductElement { shape, components }
    }

    pub fn new(shape: ProductShape, components: Vec<FreeWord>) -> Result<Self, WordError> {
        if components.len() != shape.factor_count() {
            return Err(WordError::ComponentCountMismatch {
                expected: shape.factor_count(),
                found: components.len(),
            });
        }
        for (i, w) in components.iter().enumerate() {
            if w.rank() != shape.ranks()[i] {
                return Err(WordError::RankMismatch(shape.ranks()[i], w.rank()));
            }
        }
        Ok(ProductElement { shape, components })
    }

    /// The element whose factor-`i` component is `x_j` and whose other
    /// components are trivial, where `(i, j)` locate a global generator.
    pub fn generator(shape: ProductShape, factor: usize, index: usize) -> Result<Self, WordError> {
        let mut e = ProductElement::identity(shape);
        e.components[factor] = FreeWord::generator(e.shape.ranks()[factor], index)?;
        Ok(e)
    }

    pub fn shape(&self) -> &ProductShape {
        &self.shape
    }

    pub fn components(&self) -> &[FreeWord] {
        &self.components
    }

    pub fn component(&self, factor: usize) -> &FreeWord {
        &self.components[factor]
    }

    /// Replaces the component of one factor, keeping the shape.
    pub fn with_component(&self, factor: usize, word: FreeWord) -> Result<Self, WordError> {
        if word.rank() != self.shape.ranks()[factor] {
            return Err(WordError::RankMismatch(
                self.shape.ranks()[factor],
                word.rank(),
            ));
        }
        let mut components = self.components.clone();
        components[factor] = word;
        Ok(ProductElement {
            shape: self.shape.clone(),
            components,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(FreeWord::is_identity)
    }

    pub fn multiply(&self, other: &ProductElement) -> Result<ProductElement, WordError> {
        if self.shape != other.shape {
            return Err(WordError::ShapeMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.multiply(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProductElement {
            shape: self.shape.clone(),
            components,
        })
    }

    pub fn inverse(&self) -> ProductElement {
        ProductElement {
            shape: self.shape.clone(),
            components: self.components.iter().map(FreeWord::inverse).collect(),
        }
    }

    /// True exactly when every pair of corresponding components commutes.
    pub fn commutes_with(&self, other: &ProductElement) -> Result<bool, WordError> {
        if self.shape != other.shape {
            return Err(WordError::ShapeMismatch);
        }
        for (a, b) in self.components.iter().zip(&other.components) {
            if !a.commutes_with(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The image in the abelianization of the product: the concatenation over
    /// factors of the per-generator exponent sums, indexed by the global
    /// generator order.
    pub fn abelianized_vector(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.shape.total());
        for w in &self.components {
            let mut block = vec![BigInt::zero(); w.rank()];
            for s in w.syllables() {
                block[s.generator] += &s.exponent;
            }
            v.extend(block);
        }
        v
    }

    /// True exactly when, in every factor, the abelianized component vectors
    /// of `self` and `other` are linearly dependent over ℚ. A zero block is
    /// proportional to anything. Decided by integer cross-products; no
    /// division is performed.
    pub fn blocks_proportional(&self, other: &ProductElement) -> Result<bool, WordError> {
        if self.shape != other.shape {
            return Err(WordError::ShapeMismatch);
        }
        let a = self.abelianized_vector();
        let b = other.abelianized_vector();
        for factor in 0..self.shape.factor_count() {
            let range = self.shape.block_range(factor);
            let (ab, bb) = (&a[range.clone()], &b[range]);
            for p in 0..ab.len() {
                for q in (p + 1)..ab.len() {
                    if &ab[p] * &bb[q] != &ab[q] * &bb[p] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for ProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if w.is_identity() {
                write!(f, "1")?;
            } else {
                write!(f, "{w}")?;
            }
        }
        write!(f, ")")
    }
}
