use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::Trilean;

use super::model::{vec_scale, vec_sub, OrderedGroupModel};
use super::ModelError;

/// Outcome of running one slack-`r` property over a finite pair set.
///
/// A pair counts as a failure only when the premise holds and the model
/// refutes the conclusion; an abstaining cone query makes the pair
/// inconclusive instead. `holds_on_set` is `False` exactly when a failure
/// witness exists, `Unknown` when the only obstacles are abstentions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub holds_on_set: Trilean,
    /// Pairs examined.
    pub tested: usize,
    /// Pairs whose premise did not hold at this `r`.
    pub not_applicable: usize,
    /// Indices into the input pair list witnessing failure.
    pub failures: Vec<usize>,
    /// Indices into the input pair list where the model abstained.
    pub inconclusive: Vec<usize>,
}

impl CheckReport {
    fn from_outcomes(
        tested: usize,
        not_applicable: usize,
        failures: Vec<usize>,
        inconclusive: Vec<usize>,
    ) -> CheckReport {
        let holds_on_set = if !failures.is_empty() {
            Trilean::False
        } else if !inconclusive.is_empty() {
            Trilean::Unknown
        } else {
            Trilean::True
        };
        CheckReport { holds_on_set, tested, not_applicable, failures, inconclusive }
    }
}

fn run_pairs(
    pairs: &[(Vec<BigInt>, Vec<BigInt>)],
    mut premise: impl FnMut(&[BigInt], &[BigInt]) -> Result<bool, ModelError>,
    mut conclusion: impl FnMut(&[BigInt], &[BigInt]) -> Result<Trilean, ModelError>,
) -> Result<CheckReport, ModelError> {
    let mut not_applicable = 0;
    let mut failures = Vec::new();
    let mut inconclusive = Vec::new();
    for (i, (x, y)) in pairs.iter().enumerate() {
        if !premise(x, y)? {
            not_applicable += 1;
            continue;
        }
        match conclusion(x, y)? {
            Trilean::True => {}
            Trilean::False => failures.push(i),
            Trilean::Unknown => inconclusive.push(i),
        }
    }
    Ok(CheckReport::from_outcomes(pairs.len(), not_applicable, failures, inconclusive))
}

/// For every pair with state gap `s(y) - s(x) > r`, the difference `y - x`
/// must lie in the cone.
pub fn check_r_strict_comparison(
    model: &OrderedGroupModel,
    r: &BigRational,
    pairs: &[(Vec<BigInt>, Vec<BigInt>)],
) -> Result<CheckReport, ModelError> {
    run_pairs(
        pairs,
        |x, y| Ok(model.state_eval(x)? + r < model.state_eval(y)?),
        |x, y| model.cone_contains(&vec_sub(y, x)),
    )
}

/// For every pair of equal classes with state above `r`, equality must
/// upgrade to certified equivalence of projections.
pub fn check_r_cancellation(
    model: &OrderedGroupModel,
    r: &BigRational,
    pairs: &[(Vec<BigInt>, Vec<BigInt>)],
) -> Result<CheckReport, ModelError> {
    run_pairs(
        pairs,
        |x, y| Ok(x == y && model.state_eval(x)? > *r),
        |x, y| model.certify_equivalence(x, y),
    )
}

/// For every pair with state gap `s(y) - s(x) > r`, the class `x` must be
/// certified subequivalent to `y` at the projection level.
pub fn check_r_fcq(
    model: &OrderedGroupModel,
    r: &BigRational,
    pairs: &[(Vec<BigInt>, Vec<BigInt>)],
) -> Result<CheckReport, ModelError> {
    run_pairs(
        pairs,
        |x, y| Ok(model.state_eval(x)? + r < model.state_eval(y)?),
        |x, y| model.certify_subequivalence(x, y),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterpolationOutcome {
    /// A `z` with `x_i <= z <= y_j` for all four constraints.
    Interpolant(Vec<BigInt>),
    /// The whole coordinate box `[-box_bound, box_bound]^d` was searched
    /// and contains no interpolant. No claim beyond the box.
    NoInterpolant { box_bound: u64 },
    NotApplicable(NotApplicableReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicableReason {
    /// The model's cone queries can abstain; an exhaustive refutation
    /// would not be trustworthy.
    InexactModel,
    /// Some `x_i <= y_j` fails in the cone.
    OrderPrecondition,
    /// Some state gap `s(x_i) + r < s(y_j)` fails.
    StateGapPrecondition,
}

/// Searches `[-box_bound, box_bound]^d` for `z` interpolating between
/// `x_1, x_2` and `y_1, y_2`. Exact-cone models only: a `NoInterpolant`
/// answer is an exhaustive refutation over the box.
pub fn check_r_interpolation(
    model: &OrderedGroupModel,
    r: &BigRational,
    x1: &[BigInt],
    x2: &[BigInt],
    y1: &[BigInt],
    y2: &[BigInt],
    box_bound: u64,
) -> Result<InterpolationOutcome, ModelError> {
    if !model.is_exact() {
        return Ok(InterpolationOutcome::NotApplicable(NotApplicableReason::InexactModel));
    }
    let lows = [x1, x2];
    let highs = [y1, y2];
    for x in lows {
        for y in highs {
            if !model.cone_contains(&vec_sub(y, x))?.is_true() {
                return Ok(InterpolationOutcome::NotApplicable(
                    NotApplicableReason::OrderPrecondition,
                ));
            }
            if model.state_eval(x)? + r >= model.state_eval(y)? {
                return Ok(InterpolationOutcome::NotApplicable(
                    NotApplicableReason::StateGapPrecondition,
                ));
            }
        }
    }

    let d = model.ambient_rank();
    let lo = -BigInt::from(box_bound);
    let hi = BigInt::from(box_bound);
    let mut z = vec![lo.clone(); d];
    loop {
        let mut ok = true;
        for x in lows {
            if !model.cone_contains(&vec_sub(&z, x))?.is_true() {
                ok = false;
                break;
            }
        }
        if ok {
            for y in highs {
                if !model.cone_contains(&vec_sub(y, &z))?.is_true() {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(InterpolationOutcome::Interpolant(z));
        }
        // Lexicographic odometer over the box.
        let mut carry = true;
        for coord in z.iter_mut().rev() {
            *coord += 1;
            if *coord > hi {
                *coord = lo.clone();
            } else {
                carry = false;
                break;
            }
        }
        if carry {
            return Ok(InterpolationOutcome::NoInterpolant { box_bound });
        }
    }
}

/// Two-sided bracket of the state value of `x` recovered from order data
/// alone: `sup{k/m : ku <= mx}  <=  s(x)  <=  inf{l/n : nx <= lu}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateBracket {
    pub lower: BigRational,
    /// `None` when no multiple of `x` is dominated by a multiple of the
    /// unit within the search bound.
    pub upper: Option<BigRational>,
    pub search_bound: u64,
}

impl StateBracket {
    pub fn width(&self) -> Option<BigRational> {
        self.upper.as_ref().map(|u| u - &self.lower)
    }
}

/// Searches multiplier pairs up to `search_bound` for order witnesses
/// bracketing the state of `x`. Only certified cone memberships count, so
/// the bracket is sound for abstaining oracles too; `x` itself must be
/// certified in the cone, which makes `lower >= 0` always witnessed.
///
/// The witness sets grow with the bound, so brackets shrink monotonically.
pub fn state_bounds_infsup(
    model: &OrderedGroupModel,
    x: &[BigInt],
    search_bound: u64,
) -> Result<StateBracket, ModelError> {
    if !model.cone_contains(x)?.is_true() {
        return Err(ModelError::NotCertifiedInCone);
    }
    let unit = model.unit();
    let bound = search_bound.max(1);

    // k = 0 is witnessed by the precondition, so the bracket starts at 0.
    let mut lower = BigRational::zero();
    for m in 1..=bound {
        let mx = vec_scale(x, &BigInt::from(m));
        for k in 1..=m * bound {
            let candidate = BigRational::new(BigInt::from(k), BigInt::from(m));
            if candidate <= lower {
                continue;
            }
            let ku = vec_scale(&unit, &BigInt::from(k));
            if model.cone_contains(&vec_sub(&mx, &ku))?.is_true() {
                lower = candidate;
            }
        }
    }

    let mut upper: Option<BigRational> = None;
    for n in 1..=bound {
        let nx = vec_scale(x, &BigInt::from(n));
        for l in 0..=n * bound {
            let candidate = BigRational::new(BigInt::from(l), BigInt::from(n));
            if upper.as_ref().is_some_and(|u| candidate >= *u) {
                continue;
            }
            let lu = vec_scale(&unit, &BigInt::from(l));
            if model.cone_contains(&vec_sub(&lu, &nx))?.is_true() {
                upper = Some(candidate);
            }
        }
    }

    if let Some(u) = &upper {
        debug_assert!(lower <= *u);
    }
    Ok(StateBracket { lower, upper, search_bound: bound })
}
