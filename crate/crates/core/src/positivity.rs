//! Three-valued positivity of K-classes, with checkable certificates.
//!
//! A class of `K^0((S^2)^n)` is positive when it is the class of an honest
//! vector bundle. Deciding that in general is out of scope; instead a fixed
//! rule cascade issues `Positive` or `NotPositive` only with a certificate
//! any reader can re-verify, and abstains (`Unknown`) otherwise:
//!
//! 1. the zero class is positive;
//! 2. negative virtual rank is not positive;
//! 3. a nonzero class of rank zero is not positive (connected base);
//! 4. rank at least the effective factor count is positive, by stable-range
//!    stability of bundles over a `2k`-dimensional base (Husemoller);
//! 5. a nonvanishing Chern class in a degree above the rank contradicts
//!    being a bundle class, so the class is not positive.
//!
//! `Unknown` is sound in both directions: it is never counted as a failure
//! and never upgraded silently.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::kring::{total_chern, KClass, RingError, StructuredClass, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositivityError {
    #[error("class touches coordinate {coordinate} outside the stated {n_factors} factors")]
    AmbientTooSmall { coordinate: BigInt, n_factors: BigInt },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Positive,
    NotPositive,
    Unknown,
}

/// Evidence attached to a [`Verdict`]. Every variant names the rule that
/// fired and carries the quantities needed to re-check it by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The class is zero.
    ZeroClass,
    /// Rank meets the stable-range threshold of the effective carrier.
    ThresholdRule { rank: BigInt, threshold: BigInt },
    /// Threshold fired for a difference `y - x` and `x` itself clears the
    /// ambient stable range, so the stable subequivalence is realized by an
    /// honest sub-bundle.
    SubBundle { rank_gap: BigInt, base_rank: BigInt, ambient_threshold: BigInt },
    /// Equal classes at or above the ambient stable-range threshold cancel.
    EqualAboveThreshold { rank: BigInt, threshold: BigInt },
    /// A Chern class survives in a degree above the virtual rank.
    ChernObstruction { degree: BigInt, coefficient: BigInt, monomial: Option<Subset> },
    /// Virtual rank is negative.
    NegativeRank { rank: BigInt },
    /// Nonzero class of virtual rank zero over a connected base.
    NonzeroRankZero,
    /// Cancellation asked of two distinct K-classes.
    DistinctClasses,
    /// Equal classes below the ambient threshold: the criteria are silent.
    EqualBelowThreshold { rank: BigInt, threshold: BigInt },
    /// No implemented rule applies.
    NoRuleFired,
}

/// A decision together with its evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub certificate: Certificate,
}

impl Verdict {
    fn positive(certificate: Certificate) -> Verdict {
        Verdict { decision: Decision::Positive, certificate }
    }

    fn not_positive(certificate: Certificate) -> Verdict {
        Verdict { decision: Decision::NotPositive, certificate }
    }

    fn unknown(certificate: Certificate) -> Verdict {
        Verdict { decision: Decision::Unknown, certificate }
    }

    pub fn is_positive(&self) -> bool {
        self.decision == Decision::Positive
    }

    pub fn is_not_positive(&self) -> bool {
        self.decision == Decision::NotPositive
    }

    pub fn is_unknown(&self) -> bool {
        self.decision == Decision::Unknown
    }

    /// Decision/certificate pairing invariant.
    pub fn is_consistent(&self) -> bool {
        use Certificate::*;
        match self.decision {
            Decision::Positive => matches!(
                self.certificate,
                ZeroClass | ThresholdRule { .. } | SubBundle { .. } | EqualAboveThreshold { .. }
            ),
            Decision::NotPositive => matches!(
                self.certificate,
                ChernObstruction { .. } | NegativeRank { .. } | NonzeroRankZero | DistinctClasses
            ),
            Decision::Unknown => {
                matches!(self.certificate, NoRuleFired | EqualBelowThreshold { .. })
            }
        }
    }
}

fn check_ambient_dense(a: &KClass, n_factors: usize) -> Result<(), PositivityError> {
    let coords = a.support_coords();
    match coords.indices().last() {
        Some(top) if (top as usize) > n_factors => Err(PositivityError::AmbientTooSmall {
            coordinate: BigInt::from(top),
            n_factors: BigInt::from(n_factors),
        }),
        _ => Ok(()),
    }
}

/// Decides positivity of a dense class over `(S^2)^n_factors`.
///
/// The verdict does not depend on `n_factors` beyond the containment check:
/// every rule reads only the coordinates the class actually touches.
pub fn decide_positive(a: &KClass, n_factors: usize) -> Result<Verdict, PositivityError> {
    check_ambient_dense(a, n_factors)?;

    if a.is_zero() {
        return Ok(Verdict::positive(Certificate::ZeroClass));
    }
    let rank = a.rank();
    if rank.is_negative() {
        return Ok(Verdict::not_positive(Certificate::NegativeRank { rank }));
    }
    if rank.is_zero() {
        return Ok(Verdict::not_positive(Certificate::NonzeroRankZero));
    }
    let k = BigInt::from(a.effective_factor_count());
    if rank >= k {
        return Ok(Verdict::positive(Certificate::ThresholdRule { rank, threshold: k }));
    }
    let chern = total_chern(a)?;
    let floor = rank.to_u32().expect("0 <= rank < effective factors <= 63");
    if let Some((degree, monomial, coefficient)) = chern.first_nonzero_above(floor) {
        return Ok(Verdict::not_positive(Certificate::ChernObstruction {
            degree: BigInt::from(degree),
            coefficient,
            monomial: Some(monomial),
        }));
    }
    Ok(Verdict::unknown(Certificate::NoRuleFired))
}

/// Structured-path twin of [`decide_positive`]; line sums are decided in
/// closed form at any scale.
pub fn decide_positive_structured(
    a: &StructuredClass,
    n_factors: &BigInt,
) -> Result<Verdict, PositivityError> {
    match a {
        StructuredClass::Generic(dense) => {
            let n = n_factors
                .to_usize()
                .ok_or_else(|| RingError::StructuredTooLarge)?;
            decide_positive(dense, n)
        }
        StructuredClass::LineSum { p_count, trivial_offset } => {
            if p_count > n_factors {
                return Err(PositivityError::AmbientTooSmall {
                    coordinate: p_count.clone(),
                    n_factors: n_factors.clone(),
                });
            }
            if a.is_zero() {
                return Ok(Verdict::positive(Certificate::ZeroClass));
            }
            let rank = p_count + trivial_offset;
            if rank.is_negative() {
                return Ok(Verdict::not_positive(Certificate::NegativeRank { rank }));
            }
            if rank.is_zero() {
                return Ok(Verdict::not_positive(Certificate::NonzeroRankZero));
            }
            if rank >= *p_count {
                return Ok(Verdict::positive(Certificate::ThresholdRule {
                    rank,
                    threshold: p_count.clone(),
                }));
            }
            // c = prod_{i=1..p} (1 + u_i): every degree up to p_count is
            // hit, so the first obstruction sits right above the rank.
            let degree = &rank + 1;
            debug_assert!(degree <= *p_count);
            Ok(Verdict::not_positive(Certificate::ChernObstruction {
                degree,
                coefficient: BigInt::from(1),
                monomial: None,
            }))
        }
    }
}

/// Decides `x <= y` in the ordered `K^0`, i.e. positivity of `y - x`, with a
/// sub-bundle upgrade: when the difference clears its threshold and `x`
/// clears the full ambient threshold, stable subequivalence is honest.
pub fn decide_subequivalence(
    x: &KClass,
    y: &KClass,
    n_factors: usize,
) -> Result<Verdict, PositivityError> {
    check_ambient_dense(x, n_factors)?;
    check_ambient_dense(y, n_factors)?;
    let diff = y.sub(x).map_err(PositivityError::from)?;
    let verdict = decide_positive(&diff, n_factors)?;
    Ok(upgrade_subequivalence(verdict, &x.rank(), n_factors))
}

/// Structured-path twin of [`decide_subequivalence`].
pub fn decide_subequivalence_structured(
    x: &StructuredClass,
    y: &StructuredClass,
    n_factors: &BigInt,
) -> Result<Verdict, PositivityError> {
    for part in [x, y] {
        if part.effective_factor_count() > *n_factors {
            return Err(PositivityError::AmbientTooSmall {
                coordinate: part.effective_factor_count(),
                n_factors: n_factors.clone(),
            });
        }
    }
    let diff = y.sub(x).map_err(PositivityError::from)?;
    let verdict = decide_positive_structured(&diff, n_factors)?;
    Ok(upgrade_subequivalence_big(verdict, &x.rank(), n_factors))
}

fn upgrade_subequivalence(verdict: Verdict, base_rank: &BigInt, n_factors: usize) -> Verdict {
    upgrade_subequivalence_big(verdict, base_rank, &BigInt::from(n_factors))
}

fn upgrade_subequivalence_big(verdict: Verdict, base_rank: &BigInt, n_factors: &BigInt) -> Verdict {
    match verdict.certificate {
        Certificate::ThresholdRule { rank, .. } if base_rank >= n_factors => {
            Verdict::positive(Certificate::SubBundle {
                rank_gap: rank,
                base_rank: base_rank.clone(),
                ambient_threshold: n_factors.clone(),
            })
        }
        _ => verdict,
    }
}

/// Decides whether equality of classes certifies unitary equivalence of the
/// underlying projections: yes at or above the ambient stable-range
/// threshold, unknown below it, and of course not for distinct classes.
pub fn decide_cancellation(
    p: &KClass,
    q: &KClass,
    n_factors: usize,
) -> Result<Verdict, PositivityError> {
    check_ambient_dense(p, n_factors)?;
    check_ambient_dense(q, n_factors)?;
    if p != q {
        return Ok(Verdict::not_positive(Certificate::DistinctClasses));
    }
    let rank = p.rank();
    let threshold = BigInt::from(n_factors);
    if rank >= threshold {
        Ok(Verdict::positive(Certificate::EqualAboveThreshold { rank, threshold }))
    } else {
        Ok(Verdict::unknown(Certificate::EqualBelowThreshold { rank, threshold }))
    }
}

/// A perforation witness: a non-positive class with a positive multiple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerforationWitness {
    /// Index of the class in the searched slice.
    pub index: usize,
    /// Smallest multiple that certifies positive.
    pub multiple: u64,
    pub base_verdict: Verdict,
    pub scaled_verdict: Verdict,
}

/// Searches `classes` in order for the first `x` (smallest multiple `k`)
/// with `x` certified not positive but `k * x` certified positive, for
/// `2 <= k <= max_multiple`. Unknown verdicts never enter a witness.
pub fn perforation_witness_search(
    classes: &[KClass],
    n_factors: usize,
    max_multiple: u64,
) -> Result<Option<PerforationWitness>, PositivityError> {
    for (index, x) in classes.iter().enumerate() {
        let base = decide_positive(x, n_factors)?;
        if !base.is_not_positive() {
            continue;
        }
        for k in 2..=max_multiple {
            let scaled = x.scale(&BigInt::from(k));
            let verdict = decide_positive(&scaled, n_factors)?;
            if verdict.is_positive() {
                return Ok(Some(PerforationWitness {
                    index,
                    multiple: k,
                    base_verdict: base,
                    scaled_verdict: verdict,
                }));
            }
        }
    }
    Ok(None)
}
