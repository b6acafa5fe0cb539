//! The K-theory ring of finite products of 2-spheres, exactly.
//!
//! `K^0((S^2)^n)` is the truncated polynomial ring `Z[t_1..t_n]/(t_i^2)` on
//! the reduced Bott classes, and `H^even((S^2)^n; Z)` has the same shape on
//! the orientation classes. This module provides:
//!
//! * dense classes over subsets of `{1..n}` ([`KClass`], [`CohClass`]),
//! * permutation-invariant classes compressed by monomial size
//!   ([`SymKClass`]),
//! * closed-form classes for line-bundle sums at any scale
//!   ([`StructuredClass`]),
//! * the line-bundle basis and total Chern classes ([`line_basis_decompose`],
//!   [`total_chern`], [`chern_of_structured`]).
//!
//! Library paths return structured errors instead of panicking; the dense
//! representation is capped at [`MAX_DENSE_FACTORS`] coordinates.

mod chern;
mod dense;
mod structured;
mod subset;
mod sym;

use num_bigint::BigInt;
use thiserror::Error;

pub use chern::{from_line_basis, line_basis_decompose, total_chern};
pub use dense::{CohClass, KClass};
pub use structured::{chern_of_structured, CoordEmbedding, StructuredChern, StructuredClass};
pub use subset::Subset;
pub use sym::SymKClass;

/// Hard cap on dense coordinate counts: subsets are machine-word bitmasks.
/// Larger factor counts are served by [`SymKClass`] and [`StructuredClass`].
pub const MAX_DENSE_FACTORS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("factor counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{n} factors exceeds the dense representation bound of {MAX_DENSE_FACTORS}")]
    TooManyFactors { n: usize },
    #[error("coordinate {coordinate} is outside {{1..{n_factors}}}")]
    CoordinateOutOfRange { coordinate: u32, n_factors: usize },
    #[error("embedding image {image} is outside {{1..{target_n}}}")]
    EmbeddingOutOfRange { image: BigInt, target_n: BigInt },
    #[error("embedding repeats image {image}")]
    EmbeddingNotInjective { image: BigInt },
    #[error("embedding lists {got} images for {expected} source coordinates")]
    EmbeddingArity { expected: BigInt, got: usize },
    #[error("symmetric class over n factors needs n + 1 size coefficients, expected {expected}, got {got}")]
    SymmetricArity { expected: usize, got: usize },
    #[error("not symmetric: size-{size} subsets carry both {first} and {second}")]
    NotSymmetric { size: usize, first: BigInt, second: BigInt },
    #[error("line-bundle count must be nonnegative, got {p_count}")]
    NegativeLineCount { p_count: BigInt },
    #[error("structured class too large for dense expansion")]
    StructuredTooLarge,
}
