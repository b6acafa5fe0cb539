//! Exact symbolic invariants of AH-algebra building blocks.
//!
//! The crate models matrix algebras over products of even spheres and the
//! diagonal maps between them, entirely in integer arithmetic:
//!
//! * [`kring`]: the K-theory ring of `(S^2)^n` as a truncated polynomial
//!   ring, with a compressed symmetric form, closed-form structured classes,
//!   and total Chern classes.
//! * [`positivity`]: three-valued positivity decisions for K-classes with
//!   checkable certificates (stable-range thresholds and Chern obstructions).
//! * [`ordered`]: finite ordered-group models, geometric states with
//!   inf/sup brackets, the comparison/interpolation/cancellation checkers,
//!   and Grothendieck envelopes of concrete semigroups.
//! * [`ah`]: building blocks, diagonal block maps, dimension-rank ratios and
//!   stable ranks, and induced maps on K-classes.
//! * [`villadsen`]: parameter generation and invariant tracking for
//!   Villadsen-type systems with prescribed dimension-rank ratio.
//! * [`cuntz`]: a finite rank-function model of Cuntz comparison with
//!   radius-of-comparison witnesses and perforation certificates.
//!
//! All coefficients, ranks, and ratios are exact (`BigInt`/`BigRational`);
//! nothing is floating point.

pub mod ah;
pub mod cuntz;
pub mod kring;
pub mod ordered;
pub mod positivity;
pub mod villadsen;

mod trilean;

pub use trilean::Trilean;

pub use cuntz::{CuntzElementModel, MeasureModel, RcWitness, RegionPartition};
pub use kring::{CohClass, CoordEmbedding, KClass, StructuredClass, Subset, SymKClass};
pub use ordered::{ConcreteSemigroup, OrderedGroupModel, SphereEvenModel};
pub use positivity::{Certificate, Decision, Verdict};
