//! Subcommand bodies. Each returns the certified report body, the list of
//! standalone certificates for `--out`, and whether any verdict abstained.


use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use dimrank_core::ah::{
    drr_of_block, drr_sr_bound_check, nistor_stable_rank, BuildingBlock, Summand,
};
use dimrank_core::cuntz::{
    almost_unperforated_check, almost_unperforation_witness, rc_witness_build, rc_witness_verify,
    witness_amplify, CuntzElementModel, RcWitness, RegionPartition,
};
use dimrank_core::ordered::{
    check_r_cancellation, check_r_fcq, check_r_interpolation, check_r_strict_comparison,
    InterpolationOutcome, NotApplicableReason, OrderedGroupModel,
};
use dimrank_core::positivity::{decide_positive, decide_positive_structured};
use dimrank_core::villadsen::{
    comparison_failure_radius, generate_params, rc_lower_bound_drr_half, track_y_class,
    VilladsenParams,
};
use dimrank_core::{Decision, Trilean};

use crate::input::{
    convert_class, convert_vec, CompareInput, ParsedAlgebra, ParsedClass, PositivityInput,
};
use crate::json as enc;

pub struct CommandOutput {
    pub body: Value,
    pub certificates: Vec<Value>,
    pub has_unknown: bool,
}

fn stage_blocks(params: &VilladsenParams) -> Result<Vec<BuildingBlock>, String> {
    params
        .stages()
        .iter()
        .map(|st| {
            Summand::sphere(st.p.clone(), st.n.clone())
                .map(BuildingBlock::single)
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn algebra_blocks(parsed: ParsedAlgebra) -> Result<(Vec<BuildingBlock>, &'static str), String> {
    match parsed {
        ParsedAlgebra::Block(b) => Ok((vec![b], "block")),
        ParsedAlgebra::System(s) => Ok((s.blocks().to_vec(), "system")),
        ParsedAlgebra::Villadsen { c, stages } => {
            let c = enc::parse_rational(&c).map_err(|e| format!("villadsen.c: {e}"))?;
            let params = generate_params(&c, stages).map_err(|e| e.to_string())?;
            Ok((stage_blocks(&params)?, "villadsen"))
        }
    }
}

pub fn cmd_drr(parsed: ParsedAlgebra, tail_from: usize) -> Result<CommandOutput, String> {
    let (blocks, kind) = algebra_blocks(parsed)?;
    let stage_ratios: Vec<BigRational> = blocks.iter().map(drr_of_block).collect();
    let start = tail_from.min(stage_ratios.len() - 1);
    let reported_limsup = stage_ratios[start..].iter().cloned().max().expect("nonempty");

    let mut bounds = Vec::new();
    let mut certificates = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let check = drr_sr_bound_check(block);
        let entry = json!({
            "stage": i,
            "drr": enc::rational(&check.drr),
            "half_sr_minus_one": enc::rational(&check.half_sr_minus_one),
            "holds": check.holds,
        });
        certificates
            .push(json!({ "subject": format!("drr_vs_stable_rank[{i}]"), "claim": entry.clone() }));
        bounds.push(entry);
    }

    Ok(CommandOutput {
        body: json!({
            "command": "drr",
            "input_kind": kind,
            "stage_ratios": stage_ratios.iter().map(enc::rational).collect::<Vec<_>>(),
            "tail_from": start,
            "reported_limsup": enc::rational(&reported_limsup),
            "stable_rank_bounds": bounds,
        }),
        certificates,
        has_unknown: false,
    })
}

pub fn cmd_sr(parsed: ParsedAlgebra) -> Result<CommandOutput, String> {
    let (blocks, kind) = algebra_blocks(parsed)?;
    let ranks: Vec<Value> = blocks.iter().map(|b| enc::int(&nistor_stable_rank(b))).collect();
    Ok(CommandOutput {
        body: json!({ "command": "sr", "input_kind": kind, "stable_ranks": ranks }),
        certificates: Vec::new(),
        has_unknown: false,
    })
}

pub fn cmd_construct(c: &str, stages: usize) -> Result<CommandOutput, String> {
    let c = enc::parse_rational(c).map_err(|e| format!("--c: {e}"))?;
    let params = generate_params(&c, stages).map_err(|e| e.to_string())?;

    let param_rows: Vec<Value> = params
        .stages()
        .iter()
        .enumerate()
        .map(|(i, st)| {
            json!({
                "stage": i + 1,
                "m": enc::int(&st.m),
                "s": enc::int(&st.s),
                "n": enc::int(&st.n),
                "p": enc::int(&st.p),
                "ratio": enc::rational(&st.ratio()),
            })
        })
        .collect();

    let blocks: Vec<Value> = params
        .stages()
        .iter()
        .map(|st| json!({ "sphere_factors": enc::int(&st.p), "unit_rank": enc::int(&st.n) }))
        .collect();
    // Maps are described by shape, not enumerated: stage k+1 applies m
    // coordinate projections at block offsets j*P_k plus s point evaluations.
    let maps: Vec<Value> = params
        .stages()
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            json!({
                "from_stage": i + 1,
                "to_stage": i + 2,
                "proj_count": enc::int(&w[1].m),
                "eval_count": enc::int(&w[1].s),
                "offset_stride": enc::int(&w[0].p),
                "eval_point_prefix": format!("stage{}_pt", i + 2),
            })
        })
        .collect();

    let mut certificates = Vec::new();
    let mut has_unknown = false;
    let mut y_rows = Vec::new();
    let mut radius_rows = Vec::new();
    for k in 1..=params.stages().len() {
        let y = track_y_class(&params, k).map_err(|e| e.to_string())?;
        has_unknown |= y.verdict.decision == Decision::Unknown;
        let verdict = enc::verdict(&y.verdict);
        certificates
            .push(json!({ "subject": format!("y_class_stage_{k}"), "verdict": verdict.clone() }));
        y_rows.push(json!({
            "stage": k,
            "rank": enc::int(&y.class.rank()),
            "state": enc::rational(&y.state),
            "verdict": verdict,
        }));

        let w = comparison_failure_radius(&params, k).map_err(|e| e.to_string())?;
        has_unknown |= w.subequivalence.decision == Decision::Unknown;
        let sub = enc::verdict(&w.subequivalence);
        certificates.push(json!({
            "subject": format!("comparison_failure_stage_{k}"),
            "radius": enc::rational(&w.radius),
            "verdict": sub.clone(),
        }));
        radius_rows.push(json!({
            "stage": k,
            "radius": enc::rational(&w.radius),
            "subequivalence": sub,
        }));
    }

    let rc_bound = rc_lower_bound_drr_half(&params).map_err(|e| e.to_string())?;
    Ok(CommandOutput {
        body: json!({
            "command": "construct",
            "c": enc::rational(&c),
            "stages": stages,
            "params": param_rows,
            "system": { "blocks": blocks, "maps": maps },
            "y_classes": y_rows,
            "failure_radii": radius_rows,
            "rc_lower_bound": enc::rational(&rc_bound),
        }),
        certificates,
        has_unknown,
    })
}

pub fn cmd_positivity(input: &PositivityInput) -> Result<CommandOutput, String> {
    let n = input.n_factors.value("n_factors")?;
    if !n.is_positive() {
        return Err("n_factors: must be at least 1".into());
    }
    let mut rows = Vec::new();
    let mut certificates = Vec::new();
    let mut has_unknown = false;
    for (i, spec) in input.classes.iter().enumerate() {
        let at = format!("classes[{i}]");
        let (rank, verdict) = match convert_class(spec, &n, &at)? {
            ParsedClass::Structured(sc) => {
                let v = decide_positive_structured(&sc, &n).map_err(|e| format!("{at}: {e}"))?;
                (sc.rank(), v)
            }
            ParsedClass::Dense(kc) => {
                let n_usize = usize::try_from(n.clone()).expect("convert_class bounded n");
                let v = decide_positive(&kc, n_usize).map_err(|e| format!("{at}: {e}"))?;
                (kc.rank(), v)
            }
        };
        has_unknown |= verdict.decision == Decision::Unknown;
        let verdict = enc::verdict(&verdict);
        certificates.push(json!({ "subject": format!("classes[{i}]"), "verdict": verdict }));
        rows.push(json!({ "index": i, "rank": enc::int(&rank), "verdict": verdict }));
    }
    Ok(CommandOutput {
        body: json!({
            "command": "positivity",
            "n_factors": enc::int(&n),
            "verdicts": rows,
        }),
        certificates,
        has_unknown,
    })
}

fn interpolation_json(outcome: &InterpolationOutcome) -> (Value, bool) {
    match outcome {
        InterpolationOutcome::Interpolant(z) => {
            (json!({ "outcome": "interpolant", "z": enc::int_vec(z) }), false)
        }
        InterpolationOutcome::NoInterpolant { box_bound } => {
            (json!({ "outcome": "no_interpolant", "box_bound": box_bound }), false)
        }
        InterpolationOutcome::NotApplicable(reason) => {
            let (name, abstained) = match reason {
                NotApplicableReason::InexactModel => ("inexact_model", true),
                NotApplicableReason::OrderPrecondition => ("order_precondition", false),
                NotApplicableReason::StateGapPrecondition => ("state_gap_precondition", false),
            };
            (json!({ "outcome": "not_applicable", "reason": name }), abstained)
        }
    }
}

pub fn cmd_compare(
    model: &OrderedGroupModel,
    r: &BigRational,
    input: &CompareInput,
) -> Result<CommandOutput, String> {
    let pairs = crate::input::convert_pairs(&input.pairs)?;
    let strict = check_r_strict_comparison(model, r, &pairs).map_err(|e| e.to_string())?;
    let cancel = check_r_cancellation(model, r, &pairs).map_err(|e| e.to_string())?;
    let fcq = check_r_fcq(model, r, &pairs).map_err(|e| e.to_string())?;

    let mut has_unknown = [&strict, &cancel, &fcq]
        .iter()
        .any(|rep| rep.holds_on_set == Trilean::Unknown);

    let interpolation = match &input.interpolation {
        Some(spec) => {
            let x1 = convert_vec(&spec.x1, "interpolation.x1")?;
            let x2 = convert_vec(&spec.x2, "interpolation.x2")?;
            let y1 = convert_vec(&spec.y1, "interpolation.y1")?;
            let y2 = convert_vec(&spec.y2, "interpolation.y2")?;
            let outcome = check_r_interpolation(model, r, &x1, &x2, &y1, &y2, spec.box_bound)
                .map_err(|e| e.to_string())?;
            let (value, abstained) = interpolation_json(&outcome);
            has_unknown |= abstained;
            value
        }
        None => Value::Null,
    };

    let body = json!({
        "command": "compare",
        "r": enc::rational(r),
        "pair_count": pairs.len(),
        "strict_comparison": enc::check_report(&strict),
        "cancellation": enc::check_report(&cancel),
        "fcq": enc::check_report(&fcq),
        "interpolation": interpolation,
    });
    let certificates = vec![
        json!({ "subject": "strict_comparison", "report": enc::check_report(&strict) }),
        json!({ "subject": "cancellation", "report": enc::check_report(&cancel) }),
        json!({ "subject": "fcq", "report": enc::check_report(&fcq) }),
        json!({ "subject": "interpolation", "report": body["interpolation"].clone() }),
    ];
    Ok(CommandOutput { body, certificates, has_unknown })
}

fn element_json(e: &CuntzElementModel) -> Value {
    let restriction = match e.restriction() {
        Some(z) => json!({ "rank": enc::int(&z.rank), "bott": enc::int(&z.bott) }),
        None => Value::Null,
    };
    json!({ "ranks": enc::int_vec(e.ranks()), "restriction": restriction })
}

fn witness_json(w: &RcWitness) -> Value {
    json!({
        "regions": w.partition.labels(),
        "ambient_dim": enc::int(w.partition.ambient_dim()),
        "half_dim": w.half_dim,
        "unit_rank": enc::int(&w.unit_rank),
        "bound": enc::rational(&w.bound),
        "degenerate": w.degenerate,
        "a_plus_v": element_json(&w.a_plus_v),
        "b": element_json(&w.b),
    })
}

pub fn cmd_rc_bound(
    dim: u64,
    rank: &str,
    amplify: Option<&str>,
) -> Result<CommandOutput, String> {
    let rank = enc::parse_int(rank).map_err(|e| format!("--rank: {e}"))?;
    let w = rc_witness_build(dim, &rank).map_err(|e| e.to_string())?;
    let v = rc_witness_verify(&w).map_err(|e| e.to_string())?;
    let verification = json!({
        "verified": v.verified,
        "point_mass_gaps": v.point_mass_gaps.iter().map(enc::rational).collect::<Vec<_>>(),
        "cone_excluded": v.cone_excluded,
    });

    let amplified = match amplify {
        Some(k) => {
            let k = enc::parse_int(k).map_err(|e| format!("--amplify: {e}"))?;
            let aw = witness_amplify(&w, &k).map_err(|e| e.to_string())?;
            let av = rc_witness_verify(&aw).map_err(|e| e.to_string())?;
            json!({
                "factor": enc::int(&k),
                "unit_rank": enc::int(&aw.unit_rank),
                "bound": enc::rational(&aw.bound),
                "verified": av.verified,
            })
        }
        None => Value::Null,
    };

    let body = json!({
        "command": "rc_bound",
        "witness": witness_json(&w),
        "verification": verification,
        "amplified": amplified,
    });
    let certificates = vec![json!({
        "subject": "rc_lower_bound",
        "bound": enc::rational(&w.bound),
        "verification": body["verification"].clone(),
    })];
    Ok(CommandOutput { body, certificates, has_unknown: false })
}

pub fn cmd_aup_witness(dim: u64, max_mn: u64) -> Result<CommandOutput, String> {
    if dim < 5 {
        return Err("--dim: the marked S^4 witness needs ambient dimension at least 5".into());
    }
    let partition = RegionPartition::three_region(dim, 2).map_err(|e| e.to_string())?;
    let w = almost_unperforation_witness(&partition).map_err(|e| e.to_string())?;
    let found = almost_unperforated_check(&partition, &[w.b.clone(), w.a.clone()], max_mn)
        .map_err(|e| e.to_string())?;
    let search = match &found {
        Some(f) => json!({
            "max_mn": max_mn,
            "found": {
                "x_index": f.x_index,
                "y_index": f.y_index,
                "m": f.multiple_of_x,
                "n": f.multiple_of_y,
            },
        }),
        None => json!({ "max_mn": max_mn, "found": Value::Null }),
    };
    let body = json!({
        "command": "aup_witness",
        "ambient_dim": enc::int(partition.ambient_dim()),
        "marked_half_dim": 2,
        "regions": partition.labels(),
        "a": element_json(&w.a),
        "b": element_json(&w.b),
        "relation": {
            "multiple_of_smaller": w.multiple_of_smaller,
            "multiple_of_larger": w.multiple_of_larger,
        },
        "verified": w.verified,
        "search": search,
    });
    let certificates = vec![json!({
        "subject": "perforation_relation",
        "relation": body["relation"].clone(),
        "verified": w.verified,
        "search": body["search"].clone(),
    })];
    Ok(CommandOutput { body, certificates, has_unknown: false })
}
