//! Deterministic generator and analyzer for inductive systems over growing
//! sphere powers whose connecting maps mix coordinate projections with
//! point evaluations, tuned so the stage ratios `P_k / n_k` squeeze a
//! prescribed target `c/2` from above.
//!
//! Stage data: block `k` is `M_{n_k}(C((S^2)^{P_k}))` with `P_k = m_1 ... m_k`;
//! the map into stage `k+1` is diagonal with `m_{k+1}` coordinate-block
//! projections and `s_{k+1}` evaluations, so `n_{k+1} = n_k (m_{k+1} + s_{k+1})`.
//! The tracked class `y_k = [xi^{x P_k}] - [theta_1]` is a line sum whose
//! positivity, state, and Chern data all have closed forms, so stages with
//! astronomical `P_k` cost nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

use crate::ah::{AhError, BlockMap, BuildingBlock, EigenvalueMap, InductiveSystem, Summand};
use crate::kring::{CoordEmbedding, RingError, StructuredClass};
use crate::positivity::{
    decide_positive_structured, decide_subequivalence_structured, PositivityError, Verdict,
};

#[derive(Debug, Error)]
pub enum VilladsenError {
    #[error("target ratio must be a positive rational")]
    NonPositiveTarget,
    #[error("at least one stage must be generated")]
    NoStages,
    #[error("stage {stage} is out of range 1..={stages}")]
    StageOutOfRange { stage: usize, stages: usize },
    #[error("no admissible multiplicities at stage {stage}")]
    UnsatisfiableStage { stage: usize },
    #[error(transparent)]
    Ah(#[from] AhError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Positivity(#[from] PositivityError),
}

/// Multiplicities of one stage. `m` counts coordinate projections, `s`
/// point evaluations (zero only at stage 1, which has no incoming map),
/// `n` is the unit rank and `p` the number of sphere factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageParams {
    pub m: BigInt,
    pub s: BigInt,
    pub n: BigInt,
    pub p: BigInt,
}

impl StageParams {
    /// `P_k / n_k`, the stage dimension-rank half-ratio.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.n.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VilladsenParams {
    c: BigRational,
    stages: Vec<StageParams>,
}

impl VilladsenParams {
    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn stages(&self) -> &[StageParams] {
        &self.stages
    }

    fn stage(&self, stage: usize) -> Result<&StageParams, VilladsenError> {
        if stage == 0 || stage > self.stages.len() {
            return Err(VilladsenError::StageOutOfRange { stage, stages: self.stages.len() });
        }
        Ok(&self.stages[stage - 1])
    }

    /// Re-checks every generation invariant: the recursions for `n` and
    /// `p`, positivity of the multiplicities, and the stage bracket
    /// `c/2 < P_k/n_k < c/2 + 2^{-k}`.
    pub fn validate(&self) -> Result<(), VilladsenError> {
        if self.stages.is_empty() {
            return Err(VilladsenError::NoStages);
        }
        let half = &self.c / BigRational::from(BigInt::from(2));
        let mut margin = BigRational::new(BigInt::one(), BigInt::from(2));
        let two = BigRational::from(BigInt::from(2));
        for (i, stage) in self.stages.iter().enumerate() {
            let bad = || VilladsenError::UnsatisfiableStage { stage: i + 1 };
            if !stage.m.is_positive() || !stage.n.is_positive() || !stage.p.is_positive() {
                return Err(bad());
            }
            if i == 0 {
                if !stage.s.is_zero() || stage.p != stage.m {
                    return Err(bad());
                }
            } else {
                if !stage.s.is_positive() {
                    return Err(bad());
                }
                let prev = &self.stages[i - 1];
                if stage.n != &prev.n * (&stage.m + &stage.s) || stage.p != &prev.p * &stage.m {
                    return Err(bad());
                }
            }
            let ratio = stage.ratio();
            if ratio <= half || ratio >= &half + &margin {
                return Err(bad());
            }
            margin = margin / &two;
        }
        Ok(())
    }
}

/// Smallest integer strictly above `x`.
fn next_integer_above(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom()) + 1
}

/// Generates the stage multiplicities for target `c`, deterministically:
/// stage 1 minimizes `(n_1, m_1)` lexicographically subject to
/// `m_1/n_1 in (c/2, c/2 + 1/2)`; each later stage minimizes `s` then `m`
/// subject to the next bracket. Brackets are exact rational comparisons.
pub fn generate_params(c: &BigRational, k_stages: usize) -> Result<VilladsenParams, VilladsenError> {
    if !c.is_positive() {
        return Err(VilladsenError::NonPositiveTarget);
    }
    if k_stages == 0 {
        return Err(VilladsenError::NoStages);
    }
    let half = c / BigRational::from(BigInt::from(2));

    // Stage 1: an open interval of length n/2 contains an integer once
    // n >= 3, so the scan is short.
    let mut first = None;
    let mut n1 = BigInt::one();
    while first.is_none() {
        let lo = &half * BigRational::from(n1.clone());
        let hi = &lo + BigRational::new(n1.clone(), BigInt::from(2));
        let m = next_integer_above(&lo);
        if BigRational::from(m.clone()) < hi {
            first = Some(StageParams { m: m.clone(), s: BigInt::zero(), n: n1.clone(), p: m });
        }
        n1 += 1;
    }
    let mut stages = vec![first.expect("stage-1 scan terminates by n = 3")];

    for k in 2..=k_stages {
        let prev = stages.last().expect("stage list starts nonempty");
        let ratio = prev.ratio();
        // Want ratio * m/(m+s) in (c/2, c/2 + 2^{-k}).
        let lo = &half / &ratio;
        let hi = (&half + BigRational::new(BigInt::one(), BigInt::from(2).pow(k as u32))) / &ratio;
        debug_assert!(lo < BigRational::one(), "previous bracket keeps ratio above c/2");

        let mut found = None;
        let mut s = BigInt::one();
        // For fixed s the first grid point m/(m+s) above lo approaches lo
        // as s grows, so some s lands inside (lo, hi); cap defensively.
        let cap = BigInt::from(1_000_000u64);
        while found.is_none() && s <= cap {
            // m/(m+s) > lo  <=>  m > s*lo/(1-lo).
            let m = next_integer_above(&(BigRational::from(s.clone()) * &lo / (BigRational::one() - &lo)));
            let attained = BigRational::new(m.clone(), &m + &s);
            if attained < hi {
                found = Some((m, s.clone()));
            }
            s += 1;
        }
        let (m, s) = found.ok_or(VilladsenError::UnsatisfiableStage { stage: k })?;
        stages.push(StageParams {
            n: &prev.n * (&m + &s),
            p: &prev.p * &m,
            m,
            s,
        });
    }

    let params = VilladsenParams { c: c.clone(), stages };
    params.validate()?;
    Ok(params)
}

/// Realizes the parameters as blocks and diagonal maps. Projections embed
/// the source coordinates as consecutive blocks, so their images are
/// disjoint and cover the target coordinates.
pub fn build_system(params: &VilladsenParams) -> Result<InductiveSystem, VilladsenError> {
    let mut blocks = Vec::with_capacity(params.stages.len());
    for stage in &params.stages {
        blocks.push(BuildingBlock::single(Summand::sphere(stage.p.clone(), stage.n.clone())?));
    }
    let mut maps = Vec::with_capacity(params.stages.len().saturating_sub(1));
    for (i, stage) in params.stages.iter().enumerate().skip(1) {
        let source_p = &params.stages[i - 1].p;
        let mut entries = Vec::new();
        let mut j = BigInt::zero();
        while j < stage.m {
            entries.push(EigenvalueMap::Proj {
                source: 0,
                embedding: CoordEmbedding::Block { offset: &j * source_p },
            });
            j += 1;
        }
        let mut e = BigInt::zero();
        while e < stage.s {
            entries.push(EigenvalueMap::Eval { source: 0, point: format!("stage{}_pt{}", i + 1, e) });
            e += 1;
        }
        maps.push(BlockMap::new(vec![entries])?);
    }
    Ok(InductiveSystem::new(blocks, maps)?)
}

/// The tracked class at one stage, with its geometric state and positivity
/// verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YClassAnalysis {
    pub class: StructuredClass,
    pub state: BigRational,
    pub verdict: Verdict,
}

/// `y_k = [xi^{x P_k}] - [theta_1]` as a line sum, its state
/// `(P_k - 1)/n_k`, and its (refuted) positivity.
pub fn track_y_class(params: &VilladsenParams, stage: usize) -> Result<YClassAnalysis, VilladsenError> {
    let st = params.stage(stage)?;
    let class = StructuredClass::line_sum(st.p.clone(), BigInt::from(-1))?;
    let state = BigRational::new(&st.p - 1, st.n.clone());
    let verdict = decide_positive_structured(&class, &st.p)?;
    Ok(YClassAnalysis { class, state, verdict })
}

/// A stage's strict-comparison failure: the trivial line sits a full state
/// gap of `radius` below the bundle class, yet is not subequivalent to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusWitness {
    pub radius: BigRational,
    pub trivial_class: StructuredClass,
    pub bundle_class: StructuredClass,
    pub subequivalence: Verdict,
}

pub fn comparison_failure_radius(
    params: &VilladsenParams,
    stage: usize,
) -> Result<RadiusWitness, VilladsenError> {
    let st = params.stage(stage)?;
    let trivial_class = StructuredClass::trivial(1);
    let bundle_class = StructuredClass::line_sum(st.p.clone(), BigInt::zero())?;
    let radius = BigRational::new(&st.p - 1, st.n.clone());
    let subequivalence = decide_subequivalence_structured(&trivial_class, &bundle_class, &st.p)?;
    Ok(RadiusWitness { radius, trivial_class, bundle_class, subequivalence })
}

/// Max of the stage failure radii: a certified lower bound for the radius
/// of comparison of the model, approaching `drr/2 = c/2` from below as
/// stages accumulate.
pub fn rc_lower_bound_drr_half(params: &VilladsenParams) -> Result<BigRational, VilladsenError> {
    let mut best: Option<BigRational> = None;
    for stage in 1..=params.stages().len() {
        let radius = comparison_failure_radius(params, stage)?.radius;
        if best.as_ref().is_none_or(|b| radius > *b) {
            best = Some(radius);
        }
    }
    best.ok_or(VilladsenError::NoStages)
}

#[cfg(test)]
mod tests {
    use crate::ah::induced_k0_map_structured;
    use crate::positivity::{Certificate, Decision};

    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn stage_tuple(st: &StageParams) -> (i64, i64, i64, i64) {
        let to = |b: &BigInt| i64::try_from(b).unwrap();
        (to(&st.m), to(&st.s), to(&st.n), to(&st.p))
    }

    #[test]
    fn frozen_parameters_for_target_two() {
        let params = generate_params(&rat(2, 1), 4).unwrap();
        let got: Vec<_> = params.stages().iter().map(stage_tuple).collect();
        assert_eq!(
            got,
            vec![(4, 0, 3, 4), (4, 1, 15, 16), (16, 1, 255, 256), (256, 1, 65535, 65536)]
        );
        assert_eq!(params.stages()[1].ratio(), rat(16, 15));
    }

    #[test]
    fn frozen_parameters_for_other_targets() {
        let one = generate_params(&rat(1, 1), 2).unwrap();
        assert_eq!(stage_tuple(&one.stages()[0]), (2, 0, 3, 2));
        assert_eq!(stage_tuple(&one.stages()[1]), (4, 1, 15, 8));

        let half = generate_params(&rat(1, 2), 1).unwrap();
        assert_eq!(stage_tuple(&half.stages()[0]), (1, 0, 2, 1));

        let seven_thirds = generate_params(&rat(7, 3), 2).unwrap();
        assert_eq!(stage_tuple(&seven_thirds.stages()[0]), (3, 0, 2, 3));
        assert_eq!(stage_tuple(&seven_thirds.stages()[1]), (4, 1, 10, 12));
    }

    #[test]
    fn brackets_hold_at_every_stage() {
        for (num, den) in [(1i64, 2i64), (1, 1), (2, 1), (7, 3)] {
            let c = rat(num, den);
            let params = generate_params(&c, 8).unwrap();
            params.validate().unwrap();
            let half = &c / rat(2, 1);
            for (k, stage) in params.stages().iter().enumerate() {
                let ratio = stage.ratio();
                let margin = BigRational::new(BigInt::one(), BigInt::from(2).pow(k as u32 + 1));
                assert!(ratio > half && ratio < &half + &margin, "c={c} stage {}", k + 1);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_params(&rat(7, 3), 6).unwrap();
        let b = generate_params(&rat(7, 3), 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_degenerate_requests() {
        assert!(matches!(generate_params(&rat(0, 1), 3), Err(VilladsenError::NonPositiveTarget)));
        assert!(matches!(generate_params(&rat(-1, 2), 3), Err(VilladsenError::NonPositiveTarget)));
        assert!(matches!(generate_params(&rat(2, 1), 0), Err(VilladsenError::NoStages)));
        let p = generate_params(&rat(2, 1), 2).unwrap();
        assert!(matches!(track_y_class(&p, 0), Err(VilladsenError::StageOutOfRange { .. })));
        assert!(matches!(track_y_class(&p, 3), Err(VilladsenError::StageOutOfRange { .. })));
    }

    #[test]
    fn system_realizes_the_parameters() {
        let params = generate_params(&rat(2, 1), 2).unwrap();
        let system = build_system(&params).unwrap();
        let block2 = &system.blocks()[1];
        assert_eq!(block2.summands()[0].space().sphere_factors(), Some(&BigInt::from(16)));
        assert_eq!(block2.summands()[0].unit_rank(), &BigInt::from(15));
        assert_eq!(system.maps()[0].targets()[0].len(), 5);
    }

    #[test]
    fn push_forward_shifts_y_by_the_offset_identity() {
        for (num, den) in [(2i64, 1i64), (1, 1), (7, 3)] {
            let params = generate_params(&rat(num, den), 4).unwrap();
            let system = build_system(&params).unwrap();
            for i in 1..params.stages().len() {
                let y_i = track_y_class(&params, i).unwrap().class;
                let image = induced_k0_map_structured(
                    &system.maps()[i - 1],
                    &system.blocks()[i - 1],
                    &system.blocks()[i],
                    std::slice::from_ref(&y_i),
                )
                .unwrap();

                let next = &params.stages()[i];
                let prev = &params.stages()[i - 1];
                let offset = &next.s * &prev.p - &next.m - &next.s + 1;
                let expected = track_y_class(&params, i + 1)
                    .unwrap()
                    .class
                    .add_trivial(&offset)
                    .unwrap();
                assert_eq!(image, vec![expected]);
            }
        }
        // For the target-2 parameters the offset vanishes: the map carries
        // y_i exactly onto y_{i+1}.
        let params = generate_params(&rat(2, 1), 2).unwrap();
        let system = build_system(&params).unwrap();
        let y1 = track_y_class(&params, 1).unwrap().class;
        let image = induced_k0_map_structured(
            &system.maps()[0],
            &system.blocks()[0],
            &system.blocks()[1],
            &[y1],
        )
        .unwrap();
        assert_eq!(image, vec![track_y_class(&params, 2).unwrap().class]);
    }

    #[test]
    fn y_class_state_and_verdict() {
        let params = generate_params(&rat(2, 1), 4).unwrap();
        let stage2 = track_y_class(&params, 2).unwrap();
        assert_eq!(stage2.state, rat(1, 1));
        assert_eq!(stage2.verdict.decision, Decision::NotPositive);

        // Stages with P >= 2 carry the top Chern obstruction, closed form.
        for stage in 1..=4 {
            let y = track_y_class(&params, stage).unwrap();
            let p = &params.stages()[stage - 1].p;
            match &y.verdict.certificate {
                Certificate::ChernObstruction { degree, coefficient, .. } => {
                    assert_eq!(degree, p);
                    assert_eq!(coefficient, &BigInt::one());
                }
                other => panic!("stage {stage}: unexpected certificate {other:?}"),
            }
        }

        // A rank-one product admits only the rank-zero refutation.
        let tiny = generate_params(&rat(1, 2), 1).unwrap();
        let y = track_y_class(&tiny, 1).unwrap();
        assert_eq!(y.verdict.decision, Decision::NotPositive);
        assert_eq!(y.verdict.certificate, Certificate::NonzeroRankZero);
    }

    #[test]
    fn failure_radius_and_lower_bound() {
        let params = generate_params(&rat(2, 1), 2).unwrap();
        let witness = comparison_failure_radius(&params, 2).unwrap();
        assert_eq!(witness.radius, rat(1, 1));
        assert_eq!(witness.subequivalence.decision, Decision::NotPositive);

        let one = generate_params(&rat(1, 1), 1).unwrap();
        assert_eq!(comparison_failure_radius(&one, 1).unwrap().radius, rat(1, 3));
        assert_eq!(rc_lower_bound_drr_half(&one).unwrap(), rat(1, 3));

        // The gap between the witness states is exactly the radius.
        let st = &params.stages()[1];
        let s_trivial = BigRational::new(BigInt::one(), st.n.clone());
        let s_bundle = BigRational::new(st.p.clone(), st.n.clone());
        assert_eq!(s_bundle - s_trivial, witness.radius);
    }

    #[test]
    fn lower_bound_is_monotone_in_stage_count() {
        for (num, den) in [(1i64, 2i64), (1, 1), (2, 1), (7, 3)] {
            let c = rat(num, den);
            let mut last = None;
            for stages in 1..=6 {
                let params = generate_params(&c, stages).unwrap();
                let bound = rc_lower_bound_drr_half(&params).unwrap();
                if let Some(prev) = &last {
                    assert!(bound >= *prev, "c={c} stages={stages}");
                }
                last = Some(bound);
            }
        }
    }
}
