//! Semi-homogeneous building blocks, diagonal connecting maps, and the two
//! elementary invariants read off them: the dimension-rank ratio and the
//! Nistor stable rank.
//!
//! A block is a direct sum of homogeneous summands, each a matrix algebra
//! of some unit rank over a sphere product or an abstract CW space of known
//! dimension. Connecting maps are diagonal: every target summand is a
//! block-diagonal of coordinate-projection pullbacks and point evaluations.
//! K-class bookkeeping exists only over sphere products; abstract CW
//! summands participate in dimension arithmetic alone.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

use crate::kring::{CoordEmbedding, KClass, RingError, StructuredClass, MAX_DENSE_FACTORS};

#[derive(Debug, Error)]
pub enum AhError {
    #[error("a building block needs at least one summand")]
    EmptyBlock,
    #[error("summand unit rank must be at least 1")]
    NonPositiveRank,
    #[error("space dimension must be nonnegative")]
    NegativeDimension,
    #[error("matrix amplification factor must be at least 1")]
    NonPositiveAmplification,
    #[error("map lists {got} target summands, block has {expected}")]
    TargetCount { expected: usize, got: usize },
    #[error("target summand {target} has no eigenvalue maps")]
    EmptyEigenvalueList { target: usize },
    #[error("eigenvalue map references source summand {index}, block has {count}")]
    SourceOutOfRange { index: usize, count: usize },
    #[error("target summand {target} has unit rank {expected}, eigenvalue maps supply {got}")]
    Unitality { target: usize, expected: BigInt, got: BigInt },
    #[error("coordinate projections need sphere-product source and target (target summand {target})")]
    ProjOnNonSphere { target: usize },
    #[error("expected {expected} source classes, got {got}")]
    ClassCount { expected: usize, got: usize },
    #[error("class over {got} sphere factors does not match source summand {summand}")]
    ClassArity { summand: usize, got: usize },
    #[error("summand {summand} is not a sphere product; it carries no K-classes")]
    NotSphereSummand { summand: usize },
    #[error("target ring with {n} sphere factors exceeds the dense limit of {max}", max = MAX_DENSE_FACTORS)]
    DenseTooLarge { n: BigInt },
    #[error("coordinate projections into target summand {target} have overlapping images")]
    OverlappingProjImages { target: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Spectrum of a homogeneous summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    SphereProduct { n_factors: BigInt },
    AbstractCw { dim: BigInt },
}

impl Space {
    pub fn dim(&self) -> BigInt {
        match self {
            Space::SphereProduct { n_factors } => n_factors * 2,
            Space::AbstractCw { dim } => dim.clone(),
        }
    }

    pub fn sphere_factors(&self) -> Option<&BigInt> {
        match self {
            Space::SphereProduct { n_factors } => Some(n_factors),
            Space::AbstractCw { .. } => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::SphereProduct { n_factors } => write!(f, "(S^2)^{n_factors}"),
            Space::AbstractCw { dim } => write!(f, "CW[dim {dim}]"),
        }
    }
}

/// One homogeneous summand: a rank-`unit_rank` matrix bundle algebra over
/// `space`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    space: Space,
    unit_rank: BigInt,
}

impl Summand {
    pub fn new(space: Space, unit_rank: impl Into<BigInt>) -> Result<Summand, AhError> {
        let unit_rank = unit_rank.into();
        if !unit_rank.is_positive() {
            return Err(AhError::NonPositiveRank);
        }
        if space.dim().is_negative() {
            return Err(AhError::NegativeDimension);
        }
        Ok(Summand { space, unit_rank })
    }

    pub fn sphere(n_factors: impl Into<BigInt>, unit_rank: impl Into<BigInt>) -> Result<Summand, AhError> {
        let n_factors = n_factors.into();
        if n_factors.is_negative() {
            return Err(AhError::NegativeDimension);
        }
        Summand::new(Space::SphereProduct { n_factors }, unit_rank)
    }

    pub fn cw(dim: impl Into<BigInt>, unit_rank: impl Into<BigInt>) -> Result<Summand, AhError> {
        Summand::new(Space::AbstractCw { dim: dim.into() }, unit_rank)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn unit_rank(&self) -> &BigInt {
        &self.unit_rank
    }

    pub fn dim(&self) -> BigInt {
        self.space.dim()
    }
}

/// A finite direct sum of homogeneous summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingBlock {
    summands: Vec<Summand>,
}

impl BuildingBlock {
    pub fn new(summands: Vec<Summand>) -> Result<BuildingBlock, AhError> {
        if summands.is_empty() {
            return Err(AhError::EmptyBlock);
        }
        Ok(BuildingBlock { summands })
    }

    pub fn single(summand: Summand) -> BuildingBlock {
        BuildingBlock { summands: vec![summand] }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn min_unit_rank(&self) -> BigInt {
        self.summands.iter().map(|s| s.unit_rank.clone()).min().expect("nonempty by construction")
    }
}

/// `max_l dim(X_l) / rank(p_l)`, the exact dimension-rank ratio of a block.
pub fn drr_of_block(b: &BuildingBlock) -> BigRational {
    b.summands
        .iter()
        .map(|s| BigRational::new(s.dim(), s.unit_rank.clone()))
        .max()
        .expect("nonempty by construction")
}

/// Nistor's stable rank of a block: `max_l ceil(floor(dim/2) / rank) + 1`.
pub fn nistor_stable_rank(b: &BuildingBlock) -> BigInt {
    b.summands
        .iter()
        .map(|s| s.dim().div_floor(&BigInt::from(2)).div_ceil(&s.unit_rank) + 1)
        .max()
        .expect("nonempty by construction")
}

/// The two sides of the inequality `drr >= sr/2 - 1`, which holds for every
/// block; kept as an assertion helper with the computed values exposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrrSrBound {
    pub drr: BigRational,
    pub half_sr_minus_one: BigRational,
    pub holds: bool,
}

pub fn drr_sr_bound_check(b: &BuildingBlock) -> DrrSrBound {
    let drr = drr_of_block(b);
    let sr = nistor_stable_rank(b);
    let half_sr_minus_one = BigRational::new(sr, BigInt::from(2)) - BigRational::one();
    let holds = drr >= half_sr_minus_one;
    DrrSrBound { drr, half_sr_minus_one, holds }
}

pub fn direct_sum(a: &BuildingBlock, b: &BuildingBlock) -> BuildingBlock {
    let mut summands = a.summands.clone();
    summands.extend(b.summands.iter().cloned());
    BuildingBlock { summands }
}

/// Tensors with a `k x k` matrix algebra: every unit rank is multiplied by
/// `k`, the spectra are untouched.
pub fn matrix_amplify(b: &BuildingBlock, k: &BigInt) -> Result<BuildingBlock, AhError> {
    if !k.is_positive() {
        return Err(AhError::NonPositiveAmplification);
    }
    let summands = b
        .summands
        .iter()
        .map(|s| Summand { space: s.space.clone(), unit_rank: &s.unit_rank * k })
        .collect();
    Ok(BuildingBlock { summands })
}

/// Summandwise minimal tensor product: spectra multiply (dimensions add),
/// unit ranks multiply, over all pairs of summands.
pub fn tensor_blocks(a: &BuildingBlock, b: &BuildingBlock) -> BuildingBlock {
    let mut summands = Vec::with_capacity(a.summands.len() * b.summands.len());
    for sa in &a.summands {
        for sb in &b.summands {
            let space = match (&sa.space, &sb.space) {
                (
                    Space::SphereProduct { n_factors: na },
                    Space::SphereProduct { n_factors: nb },
                ) => Space::SphereProduct { n_factors: na + nb },
                _ => Space::AbstractCw { dim: sa.dim() + sb.dim() },
            };
            summands.push(Summand { space, unit_rank: &sa.unit_rank * &sb.unit_rank });
        }
    }
    BuildingBlock { summands }
}

/// One diagonal entry of a connecting map into some target summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenvalueMap {
    /// Pullback along a coordinate projection of the target spectrum onto
    /// the source spectrum.
    Proj { source: usize, embedding: CoordEmbedding },
    /// Evaluation of the source at a point; the label is opaque metadata.
    Eval { source: usize, point: String },
}

impl EigenvalueMap {
    pub fn source(&self) -> usize {
        match self {
            EigenvalueMap::Proj { source, .. } | EigenvalueMap::Eval { source, .. } => *source,
        }
    }
}

/// A unital diagonal map between two building blocks: for each target
/// summand, the list of eigenvalue maps filling its diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    targets: Vec<Vec<EigenvalueMap>>,
}

impl BlockMap {
    pub fn new(targets: Vec<Vec<EigenvalueMap>>) -> Result<BlockMap, AhError> {
        for (t, list) in targets.iter().enumerate() {
            if list.is_empty() {
                return Err(AhError::EmptyEigenvalueList { target: t });
            }
        }
        Ok(BlockMap { targets })
    }

    pub fn targets(&self) -> &[Vec<EigenvalueMap>] {
        &self.targets
    }

    /// Checks shape, unitality, and Proj legality against concrete blocks.
    pub fn validate(&self, source: &BuildingBlock, target: &BuildingBlock) -> Result<(), AhError> {
        if self.targets.len() != target.summands.len() {
            return Err(AhError::TargetCount {
                expected: target.summands.len(),
                got: self.targets.len(),
            });
        }
        for (t, list) in self.targets.iter().enumerate() {
            let mut supplied = BigInt::zero();
            for entry in list {
                let s = entry.source();
                let src = source
                    .summands
                    .get(s)
                    .ok_or(AhError::SourceOutOfRange { index: s, count: source.summands.len() })?;
                supplied += &src.unit_rank;
                if let EigenvalueMap::Proj { embedding, .. } = entry {
                    let (Some(src_n), Some(tgt_n)) = (
                        src.space.sphere_factors(),
                        target.summands[t].space.sphere_factors(),
                    ) else {
                        return Err(AhError::ProjOnNonSphere { target: t });
                    };
                    embedding.validate_big(src_n, tgt_n)?;
                }
            }
            if supplied != target.summands[t].unit_rank {
                return Err(AhError::Unitality {
                    target: t,
                    expected: target.summands[t].unit_rank.clone(),
                    got: supplied,
                });
            }
        }
        Ok(())
    }
}

/// Blocks and validated connecting maps, one map per consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductiveSystem {
    blocks: Vec<BuildingBlock>,
    maps: Vec<BlockMap>,
}

impl InductiveSystem {
    pub fn new(blocks: Vec<BuildingBlock>, maps: Vec<BlockMap>) -> Result<InductiveSystem, AhError> {
        if blocks.is_empty() {
            return Err(AhError::EmptyBlock);
        }
        if maps.len() + 1 != blocks.len() {
            return Err(AhError::TargetCount { expected: blocks.len() - 1, got: maps.len() });
        }
        for (i, map) in maps.iter().enumerate() {
            map.validate(&blocks[i], &blocks[i + 1])?;
        }
        Ok(InductiveSystem { blocks, maps })
    }

    pub fn blocks(&self) -> &[BuildingBlock] {
        &self.blocks
    }

    pub fn maps(&self) -> &[BlockMap] {
        &self.maps
    }
}

/// Stagewise dimension-rank data of a system. `reported_limsup` is the max
/// over a caller-chosen tail of stages: an upper bound for the limit
/// invariant, not the infimum over all decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDrr {
    pub stage_ratios: Vec<BigRational>,
    pub reported_limsup: BigRational,
}

pub fn drr_of_system(s: &InductiveSystem, tail_from: usize) -> SystemDrr {
    let stage_ratios: Vec<BigRational> = s.blocks.iter().map(drr_of_block).collect();
    let start = tail_from.min(stage_ratios.len() - 1);
    let reported_limsup =
        stage_ratios[start..].iter().cloned().max().expect("nonempty by construction");
    SystemDrr { stage_ratios, reported_limsup }
}

fn sphere_factors_usize(block: &BuildingBlock, summand: usize) -> Result<usize, AhError> {
    let n = block.summands[summand]
        .space
        .sphere_factors()
        .ok_or(AhError::NotSphereSummand { summand })?;
    usize::try_from(n).map_err(|_| AhError::DenseTooLarge { n: n.clone() })
}

fn check_class_arities(source: &BuildingBlock, classes: &[KClass]) -> Result<(), AhError> {
    if classes.len() != source.summands.len() {
        return Err(AhError::ClassCount { expected: source.summands.len(), got: classes.len() });
    }
    for (i, class) in classes.iter().enumerate() {
        let n = sphere_factors_usize(source, i)?;
        if class.n_factors() != n {
            return Err(AhError::ClassArity { summand: i, got: class.n_factors() });
        }
    }
    Ok(())
}

/// Image of per-summand K-classes under a diagonal map, densely: each Proj
/// contributes a coordinate pullback, each Eval contributes `rank` trivial
/// lines. Rank is additive over the diagonal.
pub fn induced_k0_map(
    map: &BlockMap,
    source: &BuildingBlock,
    target: &BuildingBlock,
    classes: &[KClass],
) -> Result<Vec<KClass>, AhError> {
    map.validate(source, target)?;
    check_class_arities(source, classes)?;
    let mut out = Vec::with_capacity(map.targets.len());
    for (t, list) in map.targets.iter().enumerate() {
        let tgt_n = sphere_factors_usize(target, t)?;
        if tgt_n > MAX_DENSE_FACTORS {
            return Err(AhError::DenseTooLarge { n: BigInt::from(tgt_n) });
        }
        let mut acc = KClass::zero(tgt_n)?;
        for entry in list {
            let contribution = match entry {
                EigenvalueMap::Proj { source: s, embedding } => {
                    classes[*s].pullback(tgt_n, embedding)?
                }
                EigenvalueMap::Eval { source: s, .. } => {
                    KClass::constant(tgt_n, classes[*s].rank())?
                }
            };
            acc = acc.add(&contribution)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Coordinate footprint of an embedding, for disjointness checks.
enum Footprint {
    Range(BigInt, BigInt),
    Set(Vec<u32>),
}

fn footprint(embedding: &CoordEmbedding, src_n: &BigInt) -> Footprint {
    match embedding {
        CoordEmbedding::Block { offset } => Footprint::Range(offset + 1, offset + src_n),
        CoordEmbedding::Explicit(images) => {
            let mut v = images.clone();
            v.sort_unstable();
            Footprint::Set(v)
        }
    }
}

fn footprints_disjoint(a: &Footprint, b: &Footprint) -> bool {
    match (a, b) {
        (Footprint::Range(lo1, hi1), Footprint::Range(lo2, hi2)) => hi1 < lo2 || hi2 < lo1,
        (Footprint::Range(lo, hi), Footprint::Set(s)) | (Footprint::Set(s), Footprint::Range(lo, hi)) => {
            s.iter().all(|&i| {
                let i = BigInt::from(i);
                i < *lo || i > *hi
            })
        }
        (Footprint::Set(s1), Footprint::Set(s2)) => {
            // Both are sorted.
            let mut it1 = s1.iter().peekable();
            let mut it2 = s2.iter().peekable();
            while let (Some(&&a), Some(&&b)) = (it1.peek(), it2.peek()) {
                if a == b {
                    return false;
                } else if a < b {
                    it1.next();
                } else {
                    it2.next();
                }
            }
            true
        }
    }
}

/// Structured image of per-summand classes under a diagonal map.
///
/// When every Proj source class is a line sum and the Proj embeddings into
/// a target summand have pairwise disjoint images, the image is again a
/// line sum and is computed in closed form, with the target coordinates
/// normalized by a permutation (every invariant derived from the class is
/// permutation-invariant). Otherwise the summand falls back to the dense
/// path, which requires a machine-sized target ring.
pub fn induced_k0_map_structured(
    map: &BlockMap,
    source: &BuildingBlock,
    target: &BuildingBlock,
    classes: &[StructuredClass],
) -> Result<Vec<StructuredClass>, AhError> {
    map.validate(source, target)?;
    if classes.len() != source.summands.len() {
        return Err(AhError::ClassCount { expected: source.summands.len(), got: classes.len() });
    }
    for (i, class) in classes.iter().enumerate() {
        let n = source.summands[i]
            .space
            .sphere_factors()
            .ok_or(AhError::NotSphereSummand { summand: i })?;
        if let StructuredClass::Generic(k) = class {
            if BigInt::from(k.n_factors()) != *n {
                return Err(AhError::ClassArity { summand: i, got: k.n_factors() });
            }
        } else if class.effective_factor_count() > *n {
            return Err(AhError::ClassArity { summand: i, got: 0 });
        }
    }

    let mut out = Vec::with_capacity(map.targets.len());
    for (t, list) in map.targets.iter().enumerate() {
        let all_line_sums = list.iter().all(|entry| match entry {
            EigenvalueMap::Proj { source: s, .. } => {
                matches!(classes[*s], StructuredClass::LineSum { .. })
            }
            EigenvalueMap::Eval { .. } => true,
        });
        if all_line_sums {
            let mut proj_footprints = Vec::new();
            let mut lines = BigInt::zero();
            let mut offset = BigInt::zero();
            for entry in list {
                match entry {
                    EigenvalueMap::Proj { source: s, embedding } => {
                        let StructuredClass::LineSum { p_count, trivial_offset } = &classes[*s]
                        else {
                            unreachable!("checked above");
                        };
                        let src_n = source.summands[*s]
                            .space
                            .sphere_factors()
                            .expect("validated as sphere");
                        let fp = footprint(embedding, src_n);
                        if proj_footprints.iter().any(|prev| !footprints_disjoint(prev, &fp)) {
                            return Err(AhError::OverlappingProjImages { target: t });
                        }
                        proj_footprints.push(fp);
                        lines += p_count;
                        offset += trivial_offset;
                    }
                    EigenvalueMap::Eval { source: s, .. } => {
                        offset += classes[*s].rank();
                    }
                }
            }
            out.push(StructuredClass::line_sum(lines, offset)?);
        } else {
            let tgt_n = sphere_factors_usize(target, t)?;
            if tgt_n > MAX_DENSE_FACTORS {
                return Err(AhError::DenseTooLarge { n: BigInt::from(tgt_n) });
            }
            let mut acc = KClass::zero(tgt_n)?;
            for entry in list {
                let contribution = match entry {
                    EigenvalueMap::Proj { source: s, embedding } => {
                        let src_n = sphere_factors_usize(source, *s)?;
                        classes[*s].expand(src_n)?.pullback(tgt_n, embedding)?
                    }
                    EigenvalueMap::Eval { source: s, .. } => {
                        KClass::constant(tgt_n, classes[*s].rank())?
                    }
                };
                acc = acc.add(&contribution)?;
            }
            out.push(StructuredClass::Generic(acc));
        }
    }
    Ok(out)
}

/// `max_l |rank(class_l)/rank(unit_l) - global_state|`: how far the
/// summandwise states of a compatible class family stray from a single
/// global value.
pub fn summand_state_spread(
    b: &BuildingBlock,
    classes: &[StructuredClass],
    global_state: &BigRational,
) -> Result<BigRational, AhError> {
    if classes.len() != b.summands.len() {
        return Err(AhError::ClassCount { expected: b.summands.len(), got: classes.len() });
    }
    let mut spread = BigRational::zero();
    for (s, class) in b.summands.iter().zip(classes) {
        let local = BigRational::new(class.rank(), s.unit_rank.clone());
        let dev = (local - global_state).abs();
        if dev > spread {
            spread = dev;
        }
    }
    Ok(spread)
}
