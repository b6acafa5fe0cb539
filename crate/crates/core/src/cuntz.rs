//! A finite rank-function model of Cuntz comparison over a homogeneous
//! algebra: elements are rank functions on a fixed three-region partition
//! of the spectrum, one region optionally marked as an even sphere carrying
//! K-theoretic restriction data.
//!
//! Subequivalence in the model is regionwise rank domination plus positive-
//! cone membership of the restriction difference on the marked region; the
//! analytic Cuntz relation is out of scope. Dimension functions pair
//! elements against finitely supported measures, and the classical
//! radius-of-comparison lower-bound witness (trivial line versus a sphere
//! bundle padded by a trivial complement) is built and verified exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

use crate::ordered::{SphereEvenModel, Z2};
use crate::Trilean;

#[derive(Debug, Error)]
pub enum CuntzError {
    #[error("a partition needs at least one region")]
    NoRegions,
    #[error("duplicate region label {0:?}")]
    DuplicateLabel(String),
    #[error("marked region index {index} out of range for {count} regions")]
    MarkedRegionOutOfRange { index: usize, count: usize },
    #[error("marked sphere dimension 2*{half_dim} must stay below ambient dimension {ambient}")]
    MarkedDimension { half_dim: u64, ambient: BigInt },
    #[error("expected {expected} region ranks, got {got}")]
    RegionCount { expected: usize, got: usize },
    #[error("region ranks must be nonnegative")]
    NegativeRank,
    #[error("restriction class rank {got} disagrees with the marked region rank {expected}")]
    RestrictionRankMismatch { expected: BigInt, got: BigInt },
    #[error("element carries a restriction class but the partition marks no region")]
    RestrictionWithoutMark,
    #[error("partition marks a region, so elements need a restriction class")]
    MissingRestriction,
    #[error("measure weights must be nonnegative and sum to 1")]
    BadMeasure,
    #[error("unit rank must be at least 1")]
    NonPositiveUnitRank,
    #[error("amplification factor must be at least 1")]
    NonPositiveAmplification,
    #[error("ambient dimension must be at least 1")]
    AmbientZero,
    #[error("construction needs ambient dimension at least {need}, got {got}")]
    DimensionTooSmall { need: u64, got: BigInt },
    #[error("construction needs the marked sphere at half-dimension {expected}, got {got}")]
    WrongMarkedHalfDim { expected: u64, got: u64 },
}

/// The marked region: a closed even sphere inside one region of the
/// partition, carrying K-data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedRegion {
    pub region: usize,
    pub half_dim: u64,
}

/// A finite labeled partition of the spectrum of fixed dimension, with an
/// optional marked sphere region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    labels: Vec<String>,
    ambient_dim: BigInt,
    marked: Option<MarkedRegion>,
}

impl RegionPartition {
    pub fn new(
        labels: Vec<String>,
        ambient_dim: impl Into<BigInt>,
        marked: Option<MarkedRegion>,
    ) -> Result<RegionPartition, CuntzError> {
        if labels.is_empty() {
            return Err(CuntzError::NoRegions);
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(CuntzError::DuplicateLabel(label.clone()));
            }
        }
        let ambient_dim = ambient_dim.into();
        if !ambient_dim.is_positive() {
            return Err(CuntzError::AmbientZero);
        }
        if let Some(mark) = &marked {
            if mark.region >= labels.len() {
                return Err(CuntzError::MarkedRegionOutOfRange {
                    index: mark.region,
                    count: labels.len(),
                });
            }
            if BigInt::from(2 * mark.half_dim) >= ambient_dim {
                return Err(CuntzError::MarkedDimension {
                    half_dim: mark.half_dim,
                    ambient: ambient_dim,
                });
            }
        }
        Ok(RegionPartition { labels, ambient_dim, marked })
    }

    /// The partition every lower-bound argument here uses: an outer region,
    /// a collar, and a marked sphere core of half-dimension `half_dim`.
    pub fn three_region(
        ambient_dim: impl Into<BigInt>,
        half_dim: u64,
    ) -> Result<RegionPartition, CuntzError> {
        RegionPartition::new(
            vec!["X_minus_V".into(), "V_minus_Y".into(), "Y".into()],
            ambient_dim,
            Some(MarkedRegion { region: 2, half_dim }),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn region_count(&self) -> usize {
        self.labels.len()
    }

    pub fn ambient_dim(&self) -> &BigInt {
        &self.ambient_dim
    }

    pub fn marked(&self) -> Option<&MarkedRegion> {
        self.marked.as_ref()
    }

    fn cone(&self) -> Option<SphereEvenModel> {
        self.marked.as_ref().map(|m| {
            SphereEvenModel::new(m.half_dim, 1).expect("unit rank 1 is positive")
        })
    }
}

/// A model Cuntz class: its rank on each region, plus the K-class of its
/// restriction to the marked sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuntzElementModel {
    ranks: Vec<BigInt>,
    restriction: Option<Z2>,
}

impl CuntzElementModel {
    pub fn new(
        partition: &RegionPartition,
        ranks: Vec<BigInt>,
        restriction: Option<Z2>,
    ) -> Result<CuntzElementModel, CuntzError> {
        if ranks.len() != partition.region_count() {
            return Err(CuntzError::RegionCount {
                expected: partition.region_count(),
                got: ranks.len(),
            });
        }
        if ranks.iter().any(|r| r.is_negative()) {
            return Err(CuntzError::NegativeRank);
        }
        match (&partition.marked, &restriction) {
            (None, Some(_)) => return Err(CuntzError::RestrictionWithoutMark),
            (Some(_), None) => return Err(CuntzError::MissingRestriction),
            (Some(mark), Some(class)) => {
                if class.rank != ranks[mark.region] {
                    return Err(CuntzError::RestrictionRankMismatch {
                        expected: ranks[mark.region].clone(),
                        got: class.rank.clone(),
                    });
                }
            }
            (None, None) => {}
        }
        Ok(CuntzElementModel { ranks, restriction })
    }

    pub fn ranks(&self) -> &[BigInt] {
        &self.ranks
    }

    pub fn restriction(&self) -> Option<&Z2> {
        self.restriction.as_ref()
    }

    pub fn scale(&self, k: &BigInt) -> CuntzElementModel {
        CuntzElementModel {
            ranks: self.ranks.iter().map(|r| r * k).collect(),
            restriction: self.restriction.as_ref().map(|c| c.scale(k)),
        }
    }
}

/// A finitely supported probability measure on the regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureModel {
    weights: Vec<BigRational>,
}

impl MeasureModel {
    pub fn new(partition: &RegionPartition, weights: Vec<BigRational>) -> Result<MeasureModel, CuntzError> {
        if weights.len() != partition.region_count() {
            return Err(CuntzError::RegionCount {
                expected: partition.region_count(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(CuntzError::BadMeasure);
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(CuntzError::BadMeasure);
        }
        Ok(MeasureModel { weights })
    }

    pub fn point_mass(partition: &RegionPartition, region: usize) -> Result<MeasureModel, CuntzError> {
        if region >= partition.region_count() {
            return Err(CuntzError::MarkedRegionOutOfRange {
                index: region,
                count: partition.region_count(),
            });
        }
        let mut weights = vec![BigRational::zero(); partition.region_count()];
        weights[region] = BigRational::one();
        Ok(MeasureModel { weights })
    }

    /// `t*self + (1-t)*other` for `0 <= t <= 1`.
    pub fn convex(&self, other: &MeasureModel, t: &BigRational) -> Result<MeasureModel, CuntzError> {
        if t.is_negative() || *t > BigRational::one() || self.weights.len() != other.weights.len() {
            return Err(CuntzError::BadMeasure);
        }
        let one_minus = BigRational::one() - t;
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a * t + b * &one_minus)
            .collect();
        Ok(MeasureModel { weights })
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}

/// Pairs an element with a measure through the dimension function:
/// `sum_regions weight * rank / unit_rank`, exact.
pub fn ldf_pairing(
    partition: &RegionPartition,
    e: &CuntzElementModel,
    mu: &MeasureModel,
    unit_rank: &BigInt,
) -> Result<BigRational, CuntzError> {
    if e.ranks.len() != partition.region_count() || mu.weights.len() != partition.region_count() {
        return Err(CuntzError::RegionCount {
            expected: partition.region_count(),
            got: e.ranks.len().min(mu.weights.len()),
        });
    }
    if !unit_rank.is_positive() {
        return Err(CuntzError::NonPositiveUnitRank);
    }
    let mut total = BigRational::zero();
    for (w, r) in mu.weights.iter().zip(&e.ranks) {
        total += w * BigRational::new(r.clone(), unit_rank.clone());
    }
    Ok(total)
}

/// Model subequivalence `x <~ y`: regionwise rank domination plus marked
/// cone membership of the restriction difference. The sphere cone is
/// exact, so the verdict never abstains on well-formed elements; the
/// three-valued return keeps the contract of the other comparison layers.
pub fn cuntz_subequivalence(
    partition: &RegionPartition,
    x: &CuntzElementModel,
    y: &CuntzElementModel,
) -> Result<Trilean, CuntzError> {
    for e in [x, y] {
        if e.ranks.len() != partition.region_count() {
            return Err(CuntzError::RegionCount {
                expected: partition.region_count(),
                got: e.ranks.len(),
            });
        }
    }
    if x.ranks.iter().zip(&y.ranks).any(|(rx, ry)| rx > ry) {
        return Ok(Trilean::False);
    }
    if let Some(cone) = partition.cone() {
        let (Some(cx), Some(cy)) = (&x.restriction, &y.restriction) else {
            return Err(CuntzError::MissingRestriction);
        };
        if !cone.contains(&cy.sub(cx)) {
            return Ok(Trilean::False);
        }
    }
    Ok(Trilean::True)
}

/// The lower-bound witness for one ambient dimension and unit rank:
/// `a (+) v` of regionwise ranks `(n, m, m)` restricting to the sphere
/// bundle class `(m, 1)`, against `b` of ranks `(0, 1, 1)` restricting to
/// the trivial line `(1, 0)`, where `m` is the greatest integer with
/// `2m < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcWitness {
    pub partition: RegionPartition,
    pub a_plus_v: CuntzElementModel,
    pub b: CuntzElementModel,
    pub unit_rank: BigInt,
    pub half_dim: u64,
    /// `(m - 1)/unit_rank`, clamped to 0 for the degenerate cases.
    pub bound: BigRational,
    /// `m <= 1`: the bound carries no information.
    pub degenerate: bool,
}

pub fn rc_witness_build(ambient_dim: u64, unit_rank: &BigInt) -> Result<RcWitness, CuntzError> {
    if ambient_dim == 0 {
        return Err(CuntzError::AmbientZero);
    }
    if !unit_rank.is_positive() {
        return Err(CuntzError::NonPositiveUnitRank);
    }
    let m = (ambient_dim - 1) / 2;
    let partition = RegionPartition::three_region(ambient_dim, m)?;
    let a_plus_v = CuntzElementModel::new(
        &partition,
        vec![BigInt::from(ambient_dim), BigInt::from(m), BigInt::from(m)],
        Some(Z2::new(m, 1)),
    )?;
    let b = CuntzElementModel::new(
        &partition,
        vec![BigInt::zero(), BigInt::one(), BigInt::one()],
        Some(Z2::new(1, 0)),
    )?;
    let bound = if m >= 1 {
        BigRational::new(BigInt::from(m - 1), unit_rank.clone())
    } else {
        BigRational::zero()
    };
    Ok(RcWitness {
        partition,
        a_plus_v,
        b,
        unit_rank: unit_rank.clone(),
        half_dim: m,
        bound,
        degenerate: m <= 1,
    })
}

/// Outcome of checking a witness: the state gap at every point mass (and
/// so, by affinity, at every measure), and the marked-cone exclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcVerification {
    pub verified: bool,
    /// `pairing(a+v) - pairing(b)` at each region's point mass.
    pub point_mass_gaps: Vec<BigRational>,
    /// The restriction difference lies outside the marked sphere cone, so
    /// `b` is not subequivalent to `a (+) v` despite the state gap.
    pub cone_excluded: bool,
}

pub fn rc_witness_verify(w: &RcWitness) -> Result<RcVerification, CuntzError> {
    let mut point_mass_gaps = Vec::with_capacity(w.partition.region_count());
    let mut gaps_hold = true;
    for region in 0..w.partition.region_count() {
        let mu = MeasureModel::point_mass(&w.partition, region)?;
        let gap = ldf_pairing(&w.partition, &w.a_plus_v, &mu, &w.unit_rank)?
            - ldf_pairing(&w.partition, &w.b, &mu, &w.unit_rank)?;
        if gap < w.bound {
            gaps_hold = false;
        }
        point_mass_gaps.push(gap);
    }
    let cone_excluded = match cuntz_subequivalence(&w.partition, &w.b, &w.a_plus_v)? {
        Trilean::False => true,
        Trilean::True | Trilean::Unknown => false,
    };
    Ok(RcVerification { verified: gaps_hold && cone_excluded, point_mass_gaps, cone_excluded })
}

/// Tensoring the unit by `M_k` divides every state by `k`, so the certified
/// bound scales down exactly.
pub fn witness_amplify(w: &RcWitness, k: &BigInt) -> Result<RcWitness, CuntzError> {
    if !k.is_positive() {
        return Err(CuntzError::NonPositiveAmplification);
    }
    let unit_rank = &w.unit_rank * k;
    let bound = if w.half_dim >= 1 {
        BigRational::new(BigInt::from(w.half_dim - 1), unit_rank.clone())
    } else {
        BigRational::zero()
    };
    Ok(RcWitness { unit_rank, bound, ..w.clone() })
}

/// The perforation pair on a marked `S^4` model: `a` restricts to the
/// sphere bundle class `(2, 1)`, `b` to the trivial line `(1, 0)`, with
/// constant regionwise ranks 2 and 1. Then `4<b> <= 3<a>` holds while
/// `<b> <= <a>` fails on the marked cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AupWitness {
    pub partition: RegionPartition,
    pub a: CuntzElementModel,
    pub b: CuntzElementModel,
    pub multiple_of_smaller: u64,
    pub multiple_of_larger: u64,
    pub verified: bool,
}

pub fn almost_unperforation_witness(partition: &RegionPartition) -> Result<AupWitness, CuntzError> {
    let Some(mark) = partition.marked() else {
        return Err(CuntzError::MissingRestriction);
    };
    if *partition.ambient_dim() < BigInt::from(5) {
        return Err(CuntzError::DimensionTooSmall {
            need: 5,
            got: partition.ambient_dim().clone(),
        });
    }
    if mark.half_dim != 2 {
        return Err(CuntzError::WrongMarkedHalfDim { expected: 2, got: mark.half_dim });
    }
    let a = CuntzElementModel::new(
        partition,
        vec![BigInt::from(2); partition.region_count()],
        Some(Z2::new(2, 1)),
    )?;
    let b = CuntzElementModel::new(
        partition,
        vec![BigInt::one(); partition.region_count()],
        Some(Z2::new(1, 0)),
    )?;
    let four_b = b.scale(&BigInt::from(4));
    let three_a = a.scale(&BigInt::from(3));
    let relation = cuntz_subequivalence(partition, &four_b, &three_a)?.is_true();
    let direct = cuntz_subequivalence(partition, &b, &a)?.is_false();
    Ok(AupWitness {
        partition: partition.clone(),
        a,
        b,
        multiple_of_smaller: 4,
        multiple_of_larger: 3,
        verified: relation && direct,
    })
}

/// A certified failure of almost unperforation: `m x <= n y` with `m > n`
/// while `x <= y` is refuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnperforationWitness {
    pub x_index: usize,
    pub y_index: usize,
    pub multiple_of_x: u64,
    pub multiple_of_y: u64,
}

/// Exhaustive search over multiples `n < m <= max_mn` and ordered element
/// pairs, smallest `(n, m)` first. Abstaining comparisons never produce a
/// witness.
pub fn almost_unperforated_check(
    partition: &RegionPartition,
    elements: &[CuntzElementModel],
    max_mn: u64,
) -> Result<Option<UnperforationWitness>, CuntzError> {
    for n in 1..max_mn {
        for m in (n + 1)..=max_mn {
            let (mb, nb) = (BigInt::from(m), BigInt::from(n));
            for (i, x) in elements.iter().enumerate() {
                for (j, y) in elements.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let scaled_ok =
                        cuntz_subequivalence(partition, &x.scale(&mb), &y.scale(&nb))?.is_true();
                    let direct_fails = cuntz_subequivalence(partition, x, y)?.is_false();
                    if scaled_ok && direct_fails {
                        return Ok(Some(UnperforationWitness {
                            x_index: i,
                            y_index: j,
                            multiple_of_x: m,
                            multiple_of_y: n,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn unmarked(regions: usize) -> RegionPartition {
        RegionPartition::new(
            (0..regions).map(|i| format!("R{i}")).collect(),
            7,
            None,
        )
        .unwrap()
    }

    #[test]
    fn pairing_of_constant_rank_is_the_state() {
        let partition = unmarked(3);
        let e = CuntzElementModel::new(&partition, vec![BigInt::from(3); 3], None).unwrap();
        let mu = MeasureModel::new(&partition, vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        assert_eq!(ldf_pairing(&partition, &e, &mu, &BigInt::from(4)).unwrap(), rat(3, 4));
    }

    #[test]
    fn witness_pairings_at_point_masses() {
        let w = rc_witness_build(5, &BigInt::from(3)).unwrap();
        let on_outer = MeasureModel::point_mass(&w.partition, 0).unwrap();
        let on_core = MeasureModel::point_mass(&w.partition, 2).unwrap();
        assert_eq!(ldf_pairing(&w.partition, &w.b, &on_outer, &w.unit_rank).unwrap(), rat(0, 1));
        assert_eq!(
            ldf_pairing(&w.partition, &w.a_plus_v, &on_core, &w.unit_rank).unwrap(),
            rat(2, 3)
        );
    }

    #[test]
    fn pairing_is_affine_in_the_measure() {
        let partition = unmarked(3);
        let e =
            CuntzElementModel::new(&partition, vec![BigInt::from(2), BigInt::from(5), BigInt::zero()], None)
                .unwrap();
        let mu1 = MeasureModel::new(&partition, vec![rat(1, 2), rat(1, 2), rat(0, 1)]).unwrap();
        let mu2 = MeasureModel::point_mass(&partition, 2).unwrap();
        let unit = BigInt::from(3);
        for t in [rat(0, 1), rat(1, 5), rat(2, 3), rat(1, 1)] {
            let mix = mu1.convex(&mu2, &t).unwrap();
            let lhs = ldf_pairing(&partition, &e, &mix, &unit).unwrap();
            let rhs = &t * ldf_pairing(&partition, &e, &mu1, &unit).unwrap()
                + (rat(1, 1) - &t) * ldf_pairing(&partition, &e, &mu2, &unit).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn witness_bounds_frozen() {
        let w5 = rc_witness_build(5, &BigInt::one()).unwrap();
        assert_eq!(w5.half_dim, 2);
        assert_eq!(w5.bound, rat(1, 1));
        assert!(!w5.degenerate);

        let w9 = rc_witness_build(9, &BigInt::from(2)).unwrap();
        assert_eq!(w9.half_dim, 4);
        assert_eq!(w9.bound, rat(3, 2));

        let w4 = rc_witness_build(4, &BigInt::from(7)).unwrap();
        assert_eq!(w4.half_dim, 1);
        assert_eq!(w4.bound, rat(0, 1));
        assert!(w4.degenerate);
        assert!(rc_witness_verify(&w4).unwrap().verified);
    }

    #[test]
    fn verification_gaps_and_cone_exclusion() {
        let w = rc_witness_build(5, &BigInt::one()).unwrap();
        let v = rc_witness_verify(&w).unwrap();
        assert!(v.verified);
        assert!(v.cone_excluded);
        assert_eq!(v.point_mass_gaps, vec![rat(5, 1), rat(1, 1), rat(1, 1)]);
        // The tight gap equals the bound: failure is certified at every
        // radius strictly below it.
        assert_eq!(v.point_mass_gaps.iter().min().unwrap(), &w.bound);
    }

    #[test]
    fn negative_control_restriction_in_cone() {
        let mut w = rc_witness_build(5, &BigInt::one()).unwrap();
        // Replace the sphere bundle class by a trivial class of equal rank:
        // the difference (m-1, 0) is now inside the cone.
        w.a_plus_v.restriction = Some(Z2::new(2, 0));
        let v = rc_witness_verify(&w).unwrap();
        assert!(!v.cone_excluded);
        assert!(!v.verified);
    }

    #[test]
    fn amplification_divides_the_bound() {
        let w = rc_witness_build(9, &BigInt::one()).unwrap();
        assert_eq!(w.bound, rat(3, 1));
        let amped = witness_amplify(&w, &BigInt::from(3)).unwrap();
        assert_eq!(amped.bound, rat(1, 1));
        assert_eq!(amped.unit_rank, BigInt::from(3));
        assert!(rc_witness_verify(&amped).unwrap().verified);

        let same = witness_amplify(&w, &BigInt::one()).unwrap();
        assert_eq!(same, w);

        for n in 5..=11 {
            let w = rc_witness_build(n, &BigInt::from(2)).unwrap();
            for k in 1..=10u32 {
                let amped = witness_amplify(&w, &BigInt::from(k)).unwrap();
                assert!(rc_witness_verify(&amped).unwrap().verified, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn aup_witness_verifies_on_the_dim5_model() {
        let partition = RegionPartition::three_region(5, 2).unwrap();
        let w = almost_unperforation_witness(&partition).unwrap();
        assert!(w.verified);
        assert_eq!((w.multiple_of_smaller, w.multiple_of_larger), (4, 3));

        // The two sides in coordinates: 3a - 4b = (2, 3) is in the cone,
        // a - b = (1, 1) is not.
        let cone = SphereEvenModel::new(2, 1).unwrap();
        assert!(cone.contains(&Z2::new(2, 3)));
        assert!(!cone.contains(&Z2::new(1, 1)));

        assert!(matches!(
            almost_unperforation_witness(&RegionPartition::three_region(4, 1).unwrap()),
            Err(CuntzError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn aup_search_rediscovers_the_pair() {
        let partition = RegionPartition::three_region(5, 2).unwrap();
        let w = almost_unperforation_witness(&partition).unwrap();
        let found = almost_unperforated_check(&partition, &[w.b.clone(), w.a.clone()], 4)
            .unwrap()
            .expect("the (4,3) relation is inside the search box");
        assert_eq!(found.x_index, 0);
        assert_eq!(found.y_index, 1);
        assert_eq!((found.multiple_of_x, found.multiple_of_y), (4, 3));

        // No smaller multiple pair works for these two elements.
        for n in 1..4u64 {
            for m in (n + 1)..=4u64 {
                if (m, n) == (4, 3) {
                    continue;
                }
                let scaled = cuntz_subequivalence(
                    &partition,
                    &w.b.scale(&BigInt::from(m)),
                    &w.a.scale(&BigInt::from(n)),
                )
                .unwrap();
                assert!(!scaled.is_true(), "unexpected relation at ({m},{n})");
            }
        }
    }

    #[test]
    fn aup_search_finds_nothing_without_perforation() {
        let partition = unmarked(2);
        let constants: Vec<CuntzElementModel> = (1..=3)
            .map(|r| CuntzElementModel::new(&partition, vec![BigInt::from(r); 2], None).unwrap())
            .collect();
        assert_eq!(almost_unperforated_check(&partition, &constants, 5).unwrap(), None);

        let single = &constants[..1];
        assert_eq!(almost_unperforated_check(&partition, single, 5).unwrap(), None);
    }

    #[test]
    fn element_validation() {
        let partition = RegionPartition::three_region(5, 2).unwrap();
        assert!(matches!(
            CuntzElementModel::new(&partition, vec![BigInt::one(); 2], Some(Z2::new(1, 0))),
            Err(CuntzError::RegionCount { .. })
        ));
        assert!(matches!(
            CuntzElementModel::new(&partition, vec![BigInt::one(); 3], None),
            Err(CuntzError::MissingRestriction)
        ));
        assert!(matches!(
            CuntzElementModel::new(&partition, vec![BigInt::one(); 3], Some(Z2::new(2, 0))),
            Err(CuntzError::RestrictionRankMismatch { .. })
        ));
        assert!(matches!(
            RegionPartition::three_region(4, 2),
            Err(CuntzError::MarkedDimension { .. })
        ));
        assert!(matches!(
            MeasureModel::new(&partition, vec![rat(1, 2), rat(1, 2), rat(1, 2)]),
            Err(CuntzError::BadMeasure)
        ));
    }
}
