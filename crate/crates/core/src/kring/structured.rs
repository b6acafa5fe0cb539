use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dense::KClass;
use super::subset::Subset;
use super::{RingError, MAX_DENSE_FACTORS};

/// An injective map of sphere coordinates, `{1..n_src} -> {1..n_tgt}`.
///
/// `Block { offset }` sends `i` to `i + offset` and is the only form that
/// scales to Villadsen-size coordinate counts; `Explicit` lists the image of
/// each source coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordEmbedding {
    Explicit(Vec<u32>),
    Block { offset: BigInt },
}

impl CoordEmbedding {
    pub fn identity() -> CoordEmbedding {
        CoordEmbedding::Block { offset: BigInt::zero() }
    }

    /// Checks injectivity and range against machine-size coordinate counts.
    pub fn validate(&self, src_n: usize, tgt_n: usize) -> Result<(), RingError> {
        self.validate_big(&BigInt::from(src_n), &BigInt::from(tgt_n))
    }

    /// Range/injectivity check with arbitrary-precision coordinate counts.
    pub fn validate_big(&self, src_n: &BigInt, tgt_n: &BigInt) -> Result<(), RingError> {
        match self {
            CoordEmbedding::Explicit(images) => {
                if BigInt::from(images.len()) != *src_n {
                    return Err(RingError::EmbeddingArity {
                        expected: src_n.clone(),
                        got: images.len(),
                    });
                }
                let mut seen = std::collections::BTreeSet::new();
                for &im in images {
                    if im == 0 || BigInt::from(im) > *tgt_n {
                        return Err(RingError::EmbeddingOutOfRange {
                            image: BigInt::from(im),
                            target_n: tgt_n.clone(),
                        });
                    }
                    if !seen.insert(im) {
                        return Err(RingError::EmbeddingNotInjective { image: BigInt::from(im) });
                    }
                }
                Ok(())
            }
            CoordEmbedding::Block { offset } => {
                if offset.is_negative() {
                    return Err(RingError::EmbeddingOutOfRange {
                        image: offset + 1,
                        target_n: tgt_n.clone(),
                    });
                }
                if offset + src_n > *tgt_n {
                    return Err(RingError::EmbeddingOutOfRange {
                        image: offset + src_n,
                        target_n: tgt_n.clone(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Image of a single 1-based coordinate, when it fits the dense range.
    pub fn apply(&self, i: u32) -> Result<u32, RingError> {
        match self {
            CoordEmbedding::Explicit(images) => {
                images.get((i - 1) as usize).copied().ok_or(RingError::EmbeddingArity {
                    expected: BigInt::from(i),
                    got: images.len(),
                })
            }
            CoordEmbedding::Block { offset } => (offset + i).to_u32().filter(|&v| v <= 63).ok_or_else(|| {
                RingError::EmbeddingOutOfRange {
                    image: offset + i,
                    target_n: BigInt::from(MAX_DENSE_FACTORS),
                }
            }),
        }
    }

    pub fn apply_subset(&self, s: Subset) -> Result<Subset, RingError> {
        let mut indices = Vec::with_capacity(s.size() as usize);
        for i in s.indices() {
            indices.push(self.apply(i)?);
        }
        Subset::from_indices(indices).ok_or(RingError::TooManyFactors { n: 64 })
    }
}

/// A K-class in a form that avoids dense expansion when possible.
///
/// `LineSum { p_count: m, trivial_offset: r }` denotes
/// `r * [theta_1] + sum_{i=1..m} [L_i] = (r + m) + t_1 + ... + t_m`,
/// the class of an `m`-fold external product of Bott line bundles plus a
/// (possibly negative) trivial summand. Its invariants have closed forms in
/// `m` and `r`, so `m` may be astronomically large.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuredClass {
    Generic(KClass),
    LineSum { p_count: BigInt, trivial_offset: BigInt },
}

impl StructuredClass {
    pub fn line_sum(p_count: impl Into<BigInt>, trivial_offset: impl Into<BigInt>) -> Result<StructuredClass, RingError> {
        let p = p_count.into();
        if p.is_negative() {
            return Err(RingError::NegativeLineCount { p_count: p });
        }
        Ok(StructuredClass::LineSum { p_count: p, trivial_offset: trivial_offset.into() })
    }

    /// `r * [theta_1]` without committing to an ambient factor count.
    pub fn trivial(r: impl Into<BigInt>) -> StructuredClass {
        StructuredClass::LineSum { p_count: BigInt::zero(), trivial_offset: r.into() }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            StructuredClass::Generic(a) => a.is_zero(),
            StructuredClass::LineSum { p_count, trivial_offset } => {
                p_count.is_zero() && trivial_offset.is_zero()
            }
        }
    }

    pub fn rank(&self) -> BigInt {
        match self {
            StructuredClass::Generic(a) => a.rank(),
            StructuredClass::LineSum { p_count, trivial_offset } => p_count + trivial_offset,
        }
    }

    /// Number of coordinates the class depends on.
    pub fn effective_factor_count(&self) -> BigInt {
        match self {
            StructuredClass::Generic(a) => BigInt::from(a.effective_factor_count()),
            StructuredClass::LineSum { p_count, .. } => p_count.clone(),
        }
    }

    /// Adds `k * [theta_1]`.
    pub fn add_trivial(&self, k: &BigInt) -> Result<StructuredClass, RingError> {
        match self {
            StructuredClass::Generic(a) => {
                let c = KClass::constant(a.n_factors(), k.clone())?;
                Ok(StructuredClass::Generic(a.add(&c)?))
            }
            StructuredClass::LineSum { p_count, trivial_offset } => Ok(StructuredClass::LineSum {
                p_count: p_count.clone(),
                trivial_offset: trivial_offset + k,
            }),
        }
    }

    /// `self - other`, staying in closed form when the line parts align and
    /// falling back to dense expansion otherwise.
    pub fn sub(&self, other: &StructuredClass) -> Result<StructuredClass, RingError> {
        use StructuredClass::*;
        match (self, other) {
            (
                LineSum { p_count: p1, trivial_offset: r1 },
                LineSum { p_count: p2, trivial_offset: r2 },
            ) => {
                if p2.is_zero() {
                    Ok(LineSum { p_count: p1.clone(), trivial_offset: r1 - r2 })
                } else if p1 == p2 {
                    Ok(LineSum { p_count: BigInt::zero(), trivial_offset: r1 - r2 })
                } else {
                    let n = p1.max(p2);
                    let a = self.expand_to(n)?;
                    let b = other.expand_to(n)?;
                    Ok(Generic(a.sub(&b)?))
                }
            }
            (Generic(a), Generic(b)) => Ok(Generic(a.sub(b)?)),
            (Generic(a), b @ LineSum { .. }) => {
                let bn = b.expand(a.n_factors())?;
                Ok(Generic(a.sub(&bn)?))
            }
            (a @ LineSum { .. }, Generic(b)) => {
                let an = a.expand(b.n_factors())?;
                Ok(Generic(an.sub(b)?))
            }
        }
    }

    fn expand_to(&self, n: &BigInt) -> Result<KClass, RingError> {
        let n = n
            .to_usize()
            .filter(|&n| n <= MAX_DENSE_FACTORS)
            .ok_or(RingError::StructuredTooLarge)?;
        self.expand(n)
    }

    /// Dense expansion over `n` ambient factors.
    pub fn expand(&self, n: usize) -> Result<KClass, RingError> {
        match self {
            StructuredClass::Generic(a) => {
                if a.n_factors() == n {
                    Ok(a.clone())
                } else if a.n_factors() <= n {
                    a.pullback(n, &CoordEmbedding::identity())
                } else {
                    Err(RingError::DimensionMismatch { left: a.n_factors(), right: n })
                }
            }
            StructuredClass::LineSum { p_count, trivial_offset } => {
                let p = p_count.to_usize().filter(|&p| p <= n).ok_or(RingError::StructuredTooLarge)?;
                let mut c = KClass::constant(n, trivial_offset + p_count)?;
                for i in 1..=p {
                    c = c.add(&KClass::bott(n, i as u32)?)?;
                }
                Ok(c)
            }
        }
    }
}

/// Top nonvanishing Chern degree and a witness coefficient, computed without
/// dense expansion where the class's shape allows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredChern {
    /// Largest `j` with `c_j != 0`; `None` when the total Chern class is `1`.
    pub top_degree: Option<BigInt>,
    /// A nonzero coefficient occurring in that top degree.
    pub witness_coefficient: BigInt,
}

/// Total-Chern summary of a structured class.
///
/// For `LineSum { p_count: m, .. }` the total Chern class is
/// `prod_{i=1..m} (1 + u_i)` regardless of the trivial offset, so the top
/// nonvanishing degree is exactly `m` with witness monomial `u_1...u_m` and
/// coefficient one.
pub fn chern_of_structured(class: &StructuredClass) -> Result<StructuredChern, RingError> {
    match class {
        StructuredClass::LineSum { p_count, .. } => {
            if p_count.is_zero() {
                Ok(StructuredChern { top_degree: None, witness_coefficient: BigInt::one() })
            } else {
                Ok(StructuredChern {
                    top_degree: Some(p_count.clone()),
                    witness_coefficient: BigInt::one(),
                })
            }
        }
        StructuredClass::Generic(a) => {
            let c = super::chern::total_chern(a)?;
            match c.top_nonvanishing_degree() {
                None | Some(0) => Ok(StructuredChern { top_degree: None, witness_coefficient: BigInt::one() }),
                Some(j) => {
                    let witness = c
                        .terms()
                        .filter(|(s, _)| s.size() == j)
                        .map(|(_, v)| v.clone())
                        .next()
                        .expect("degree reported nonzero");
                    Ok(StructuredChern { top_degree: Some(BigInt::from(j)), witness_coefficient: witness })
                }
            }
        }
    }
}
