//! Exact-value JSON conventions: rationals travel as "p/q" strings,
//! integers as decimal strings, so nothing is ever squeezed through a
//! float. Rendering is canonical (reduced fraction, positive denominator),
//! so emitted values re-parse to themselves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use dimrank_core::kring::Subset;
use dimrank_core::ordered::CheckReport;
use dimrank_core::positivity::{Certificate, Decision, Verdict};
use dimrank_core::Trilean;

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt =
        numer.parse().map_err(|_| format!("bad rational {s:?}: integer part {numer:?}"))?;
    let denom: BigInt = match denom {
        Some(d) => d.parse().map_err(|_| format!("bad rational {s:?}: denominator {d:?}"))?,
        None => BigInt::from(1),
    };
    if !denom.is_positive() {
        return Err(format!("bad rational {s:?}: denominator must be positive"));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn parse_int(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("bad integer {s:?}"))
}

pub fn trilean(t: Trilean) -> Value {
    Value::String(
        match t {
            Trilean::True => "true",
            Trilean::False => "false",
            Trilean::Unknown => "unknown",
        }
        .into(),
    )
}

pub fn decision(d: &Decision) -> Value {
    Value::String(
        match d {
            Decision::Positive => "positive",
            Decision::NotPositive => "not_positive",
            Decision::Unknown => "unknown",
        }
        .into(),
    )
}

fn subset(s: Subset) -> Value {
    Value::Array(s.indices().map(|i| json!(i)).collect())
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::ZeroClass => json!({ "rule": "zero_class" }),
        Certificate::ThresholdRule { rank, threshold } => {
            json!({ "rule": "threshold", "rank": int(rank), "threshold": int(threshold) })
        }
        Certificate::SubBundle { rank_gap, base_rank, ambient_threshold } => json!({
            "rule": "sub_bundle",
            "rank_gap": int(rank_gap),
            "base_rank": int(base_rank),
            "ambient_threshold": int(ambient_threshold),
        }),
        Certificate::EqualAboveThreshold { rank, threshold } => json!({
            "rule": "equal_above_threshold",
            "rank": int(rank),
            "threshold": int(threshold),
        }),
        Certificate::ChernObstruction { degree, coefficient, monomial } => json!({
            "rule": "chern_obstruction",
            "degree": int(degree),
            "coefficient": int(coefficient),
            "monomial": monomial.map(subset).unwrap_or(Value::Null),
        }),
        Certificate::NegativeRank { rank } => {
            json!({ "rule": "negative_rank", "rank": int(rank) })
        }
        Certificate::NonzeroRankZero => json!({ "rule": "nonzero_rank_zero" }),
        Certificate::DistinctClasses => json!({ "rule": "distinct_classes" }),
        Certificate::EqualBelowThreshold { rank, threshold } => json!({
            "rule": "equal_below_threshold",
            "rank": int(rank),
            "threshold": int(threshold),
        }),
        Certificate::NoRuleFired => json!({ "rule": "no_rule_fired" }),
    }
}

pub fn verdict(v: &Verdict) -> Value {
    json!({ "decision": decision(&v.decision), "certificate": certificate(&v.certificate) })
}

pub fn check_report(r: &CheckReport) -> Value {
    json!({
        "holds_on_set": trilean(r.holds_on_set),
        "tested": r.tested,
        "not_applicable": r.not_applicable,
        "failures": r.failures,
        "inconclusive": r.inconclusive,
    })
}

pub fn int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}
