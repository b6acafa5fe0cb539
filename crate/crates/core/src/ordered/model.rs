use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::kring::{KClass, Subset};
use crate::positivity::{decide_cancellation, decide_positive, decide_subequivalence, Decision};
use crate::Trilean;

use super::semigroup::ConcreteSemigroup;
use super::ModelError;

/// An element of `Z^2` written as (virtual rank, Bott coefficient).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2 {
    pub rank: BigInt,
    pub bott: BigInt,
}

impl Z2 {
    pub fn new(rank: impl Into<BigInt>, bott: impl Into<BigInt>) -> Z2 {
        Z2 { rank: rank.into(), bott: bott.into() }
    }

    pub fn sub(&self, other: &Z2) -> Z2 {
        Z2 { rank: &self.rank - &other.rank, bott: &self.bott - &other.bott }
    }

    pub fn scale(&self, k: &BigInt) -> Z2 {
        Z2 { rank: &self.rank * k, bott: &self.bott * k }
    }

    pub fn as_vec(&self) -> Vec<BigInt> {
        vec![self.rank.clone(), self.bott.clone()]
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rank, self.bott)
    }
}

/// `(K_0(C(S^{2m})), K_0^+, [theta_R])` with the rank/Bott coordinates.
///
/// The positive cone is exactly `{(x, y) : y = 0, x >= 0} u {(x, y) : x >= m}`:
/// low-rank classes are positive only when trivial, and everything of rank
/// at least `m` is a bundle class by stable-range reasons. Membership is
/// exact; no query abstains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereEvenModel {
    half_dim: u64,
    unit_rank: BigInt,
}

impl SphereEvenModel {
    /// `half_dim` is the `m` of `S^{2m}`; the order unit is `(unit_rank, 0)`
    /// and must have positive rank.
    pub fn new(half_dim: u64, unit_rank: impl Into<BigInt>) -> Result<SphereEvenModel, ModelError> {
        let unit_rank = unit_rank.into();
        if !unit_rank.is_positive() {
            return Err(ModelError::DegenerateUnit);
        }
        Ok(SphereEvenModel { half_dim, unit_rank })
    }

    pub fn half_dim(&self) -> u64 {
        self.half_dim
    }

    pub fn unit_rank(&self) -> &BigInt {
        &self.unit_rank
    }

    pub fn unit(&self) -> Z2 {
        Z2::new(self.unit_rank.clone(), 0)
    }

    /// Exact positive-cone membership.
    pub fn contains(&self, x: &Z2) -> bool {
        (x.bott.is_zero() && !x.rank.is_negative()) || x.rank >= BigInt::from(self.half_dim)
    }

    /// The unique normalized state: rank over unit rank.
    pub fn state(&self, x: &Z2) -> BigRational {
        BigRational::new(x.rank.clone(), self.unit_rank.clone())
    }

    /// Whether equality of classes certifies equivalence of projections:
    /// yes at rank >= m (cancellation holds in the stable range).
    pub fn certify_equivalence(&self, x: &Z2, y: &Z2) -> Trilean {
        if x != y {
            Trilean::False
        } else if x.rank >= BigInt::from(self.half_dim) {
            Trilean::True
        } else {
            Trilean::Unknown
        }
    }

    /// Whether `x` embeds as a subprojection of `y`. The difference must be
    /// in the cone; the embedding is honest when either the gap or the
    /// target clears the stable range.
    pub fn certify_subequivalence(&self, x: &Z2, y: &Z2) -> Trilean {
        let diff = y.sub(x);
        if !self.contains(&diff) {
            return Trilean::False;
        }
        let m = BigInt::from(self.half_dim);
        if diff.rank >= m || y.rank >= m {
            Trilean::True
        } else if diff.rank.is_zero() && diff.bott.is_zero() {
            self.certify_equivalence(x, y)
        } else {
            Trilean::Unknown
        }
    }
}

/// Positivity oracle for the cone of a free ambient group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeOracle {
    /// Cone `N^d`: exact.
    NonNegOrthant,
    /// Cone generated by explicit vectors in `N^d`: exact bounded search.
    Semigroup(ConcreteSemigroup),
    /// `K^0((S^2)^n)` with coordinates indexed by monomial bitmask; decided
    /// by the certificate cascade, so membership may abstain.
    SphereProductK { n_factors: usize },
}

/// A subgroup of `Z^d` with an oracle-defined cone and a designated order
/// unit; optionally a designated rank functional inducing the state
/// `x -> <f, x> / <f, unit>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWithOracle {
    pub d: usize,
    pub oracle: ConeOracle,
    pub unit: Vec<BigInt>,
    pub rank_functional: Option<Vec<BigInt>>,
}

impl FreeWithOracle {
    /// `K^0((S^2)^n)` ordered by honest-bundle classes, with order unit of
    /// rank `unit_rank` and the rank state designated.
    pub fn sphere_product(n_factors: usize, unit_rank: impl Into<BigInt>) -> Result<FreeWithOracle, ModelError> {
        if n_factors > 20 {
            return Err(ModelError::AmbientTooLarge { d: n_factors });
        }
        let d = 1usize << n_factors;
        let unit_rank = unit_rank.into();
        if !unit_rank.is_positive() {
            return Err(ModelError::DegenerateUnit);
        }
        let mut unit = vec![BigInt::zero(); d];
        unit[0] = unit_rank;
        let mut f = vec![BigInt::zero(); d];
        f[0] = BigInt::from(1);
        Ok(FreeWithOracle {
            d,
            oracle: ConeOracle::SphereProductK { n_factors },
            unit,
            rank_functional: Some(f),
        })
    }

    fn check_dim(&self, x: &[BigInt]) -> Result<(), ModelError> {
        if x.len() == self.d {
            Ok(())
        } else {
            Err(ModelError::ElementArity { expected: self.d, got: x.len() })
        }
    }

    fn to_kclass(n_factors: usize, x: &[BigInt]) -> KClass {
        KClass::from_terms(
            n_factors,
            x.iter()
                .enumerate()
                .map(|(mask, v)| (Subset::from_mask(mask as u64), v.clone())),
        )
        .expect("mask indices fit the stated factor count")
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        match &self.oracle {
            ConeOracle::NonNegOrthant => {
                Ok(Trilean::from_bool(x.iter().all(|v| !v.is_negative())))
            }
            ConeOracle::Semigroup(s) => Ok(Trilean::from_bool(s.contains(x)?)),
            ConeOracle::SphereProductK { n_factors } => {
                let class = Self::to_kclass(*n_factors, x);
                Ok(decision_to_trilean(decide_positive(&class, *n_factors)?.decision))
            }
        }
    }

    pub fn certify_equivalence(&self, x: &[BigInt], y: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match &self.oracle {
            // Concrete monoid cones are cancellative: classes are equal iff
            // the elements are identified.
            ConeOracle::NonNegOrthant | ConeOracle::Semigroup(_) => {
                Ok(Trilean::from_bool(x == y))
            }
            ConeOracle::SphereProductK { n_factors } => {
                let p = Self::to_kclass(*n_factors, x);
                let q = Self::to_kclass(*n_factors, y);
                Ok(decision_to_trilean(decide_cancellation(&p, &q, *n_factors)?.decision))
            }
        }
    }

    pub fn certify_subequivalence(&self, x: &[BigInt], y: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match &self.oracle {
            ConeOracle::NonNegOrthant | ConeOracle::Semigroup(_) => {
                let diff = vec_sub(y, x);
                self.contains(&diff)
            }
            ConeOracle::SphereProductK { n_factors } => {
                let p = Self::to_kclass(*n_factors, x);
                let q = Self::to_kclass(*n_factors, y);
                Ok(decision_to_trilean(decide_subequivalence(&p, &q, *n_factors)?.decision))
            }
        }
    }

    /// Whether cone queries can abstain.
    pub fn is_exact(&self) -> bool {
        !matches!(self.oracle, ConeOracle::SphereProductK { .. })
    }
}

fn decision_to_trilean(d: Decision) -> Trilean {
    match d {
        Decision::Positive => Trilean::True,
        Decision::NotPositive => Trilean::False,
        Decision::Unknown => Trilean::Unknown,
    }
}

/// A partially ordered abelian group model with order unit.
///
/// Elements are ambient integer vectors; [`OrderedGroupModel::SphereEven`]
/// uses the two coordinates (rank, Bott).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderedGroupModel {
    SphereEven(SphereEvenModel),
    Free(FreeWithOracle),
    /// Direct product ordered by the product cone. No designated state.
    Product(Vec<OrderedGroupModel>),
}

impl OrderedGroupModel {
    pub fn ambient_rank(&self) -> usize {
        match self {
            OrderedGroupModel::SphereEven(_) => 2,
            OrderedGroupModel::Free(f) => f.d,
            OrderedGroupModel::Product(fs) => fs.iter().map(|f| f.ambient_rank()).sum(),
        }
    }

    pub fn unit(&self) -> Vec<BigInt> {
        match self {
            OrderedGroupModel::SphereEven(m) => m.unit().as_vec(),
            OrderedGroupModel::Free(f) => f.unit.clone(),
            OrderedGroupModel::Product(fs) => fs.iter().flat_map(|f| f.unit()).collect(),
        }
    }

    /// Whether cone membership is decided exactly (no `Unknown`).
    pub fn is_exact(&self) -> bool {
        match self {
            OrderedGroupModel::SphereEven(_) => true,
            OrderedGroupModel::Free(f) => f.is_exact(),
            OrderedGroupModel::Product(fs) => fs.iter().all(|f| f.is_exact()),
        }
    }

    fn check_dim(&self, x: &[BigInt]) -> Result<(), ModelError> {
        let d = self.ambient_rank();
        if x.len() == d {
            Ok(())
        } else {
            Err(ModelError::ElementArity { expected: d, got: x.len() })
        }
    }

    fn as_z2(x: &[BigInt]) -> Z2 {
        Z2::new(x[0].clone(), x[1].clone())
    }

    pub fn cone_contains(&self, x: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        match self {
            OrderedGroupModel::SphereEven(m) => Ok(Trilean::from_bool(m.contains(&Self::as_z2(x)))),
            OrderedGroupModel::Free(f) => f.contains(x),
            OrderedGroupModel::Product(fs) => {
                self.combine_factorwise(fs, x, x, |f, xs, _| f.cone_contains(xs))
            }
        }
    }

    /// The designated state, where one exists.
    pub fn state_eval(&self, x: &[BigInt]) -> Result<BigRational, ModelError> {
        self.check_dim(x)?;
        match self {
            OrderedGroupModel::SphereEven(m) => Ok(m.state(&Self::as_z2(x))),
            OrderedGroupModel::Free(f) => {
                let functional = f.rank_functional.as_ref().ok_or(ModelError::NoDesignatedState)?;
                let denom = dot(functional, &f.unit);
                if !denom.is_positive() {
                    return Err(ModelError::DegenerateUnit);
                }
                Ok(BigRational::new(dot(functional, x), denom))
            }
            OrderedGroupModel::Product(_) => Err(ModelError::NoDesignatedState),
        }
    }

    pub fn certify_equivalence(&self, x: &[BigInt], y: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match self {
            OrderedGroupModel::SphereEven(m) => {
                Ok(m.certify_equivalence(&Self::as_z2(x), &Self::as_z2(y)))
            }
            OrderedGroupModel::Free(f) => f.certify_equivalence(x, y),
            OrderedGroupModel::Product(fs) => {
                self.combine_factorwise(fs, x, y, |f, xs, ys| f.certify_equivalence(xs, ys))
            }
        }
    }

    pub fn certify_subequivalence(&self, x: &[BigInt], y: &[BigInt]) -> Result<Trilean, ModelError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match self {
            OrderedGroupModel::SphereEven(m) => {
                Ok(m.certify_subequivalence(&Self::as_z2(x), &Self::as_z2(y)))
            }
            OrderedGroupModel::Free(f) => f.certify_subequivalence(x, y),
            OrderedGroupModel::Product(fs) => {
                self.combine_factorwise(fs, x, y, |f, xs, ys| f.certify_subequivalence(xs, ys))
            }
        }
    }

    fn combine_factorwise(
        &self,
        fs: &[OrderedGroupModel],
        x: &[BigInt],
        y: &[BigInt],
        mut per_factor: impl FnMut(&OrderedGroupModel, &[BigInt], &[BigInt]) -> Result<Trilean, ModelError>,
    ) -> Result<Trilean, ModelError> {
        let mut offset = 0;
        let mut acc = Trilean::True;
        for f in fs {
            let d = f.ambient_rank();
            let verdict = per_factor(f, &x[offset..offset + d], &y[offset..offset + d])?;
            acc = acc.and(verdict);
            offset += d;
        }
        Ok(acc)
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn vec_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn vec_scale(a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * k).collect()
}
