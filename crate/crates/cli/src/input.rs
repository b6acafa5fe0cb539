//! Input file formats and their conversion to core types. Every integer
//! field accepts either a JSON number or a decimal string (large values
//! need strings); rationals are "p/q" strings only. Conversion errors
//! carry the JSON path of the offending field.

use num_bigint::BigInt;
use serde::Deserialize;

use dimrank_core::ah::{BlockMap, BuildingBlock, EigenvalueMap, InductiveSystem, Summand};
use dimrank_core::kring::{CoordEmbedding, KClass, StructuredClass, Subset};
use dimrank_core::ordered::{
    grothendieck_envelope, ConcreteSemigroup, ConeOracle, FreeWithOracle, OrderedGroupModel,
    SphereEvenModel,
};

use crate::json::parse_int;

/// Dense-ring guard: coordinates beyond this count refuse to expand.
pub fn dense_factor_cap() -> usize {
    match std::env::var("DIMRANK_MAX_DENSE_FACTORS") {
        Ok(v) => v.parse().unwrap_or(16),
        Err(_) => 16,
    }
}

/// A JSON integer or decimal string, decoded exactly.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IntField {
    Number(i64),
    Text(String),
}

impl IntField {
    pub fn value(&self, at: &str) -> Result<BigInt, String> {
        match self {
            IntField::Number(v) => Ok(BigInt::from(*v)),
            IntField::Text(s) => parse_int(s).map_err(|e| format!("{at}: {e}")),
        }
    }
}

fn int_list(fields: &[IntField], at: &str) -> Result<Vec<BigInt>, String> {
    fields
        .iter()
        .enumerate()
        .map(|(i, f)| f.value(&format!("{at}[{i}]")))
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub block: Option<BlockSpec>,
    pub villadsen: Option<VilladsenSpec>,
    pub blocks: Option<Vec<BlockSpec>>,
    pub maps: Option<Vec<MapSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VilladsenSpec {
    pub c: String,
    pub stages: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub summands: Vec<SummandSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandSpec {
    pub space: SpaceSpec,
    pub unit_rank: IntField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub sphere_factors: Option<IntField>,
    pub cw_dim: Option<IntField>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub targets: Vec<Vec<EigenvalueSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenvalueSpec {
    pub proj: Option<ProjSpec>,
    pub eval: Option<EvalSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjSpec {
    pub source: usize,
    pub embedding: EmbeddingSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub block_offset: Option<IntField>,
    pub coords: Option<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSpec {
    pub source: usize,
    pub point: String,
}

/// What an algebra spec file describes.
pub enum ParsedAlgebra {
    Block(BuildingBlock),
    Villadsen { c: String, stages: usize },
    System(InductiveSystem),
}

pub fn convert_algebra(spec: &AlgebraSpec) -> Result<ParsedAlgebra, String> {
    match (&spec.block, &spec.villadsen, &spec.blocks, &spec.maps) {
        (Some(block), None, None, None) => {
            Ok(ParsedAlgebra::Block(convert_block(block, "block")?))
        }
        (None, Some(v), None, None) => {
            Ok(ParsedAlgebra::Villadsen { c: v.c.clone(), stages: v.stages })
        }
        (None, None, Some(blocks), Some(maps)) => {
            let blocks: Vec<BuildingBlock> = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| convert_block(b, &format!("blocks[{i}]")))
                .collect::<Result<_, _>>()?;
            let maps: Vec<BlockMap> = maps
                .iter()
                .enumerate()
                .map(|(i, m)| convert_map(m, &format!("maps[{i}]")))
                .collect::<Result<_, _>>()?;
            InductiveSystem::new(blocks, maps).map(ParsedAlgebra::System).map_err(|e| format!("{e}"))
        }
        _ => Err("spec must contain exactly one of: \"block\", \"villadsen\", \"blocks\"+\"maps\"".into()),
    }
}

fn convert_block(spec: &BlockSpec, at: &str) -> Result<BuildingBlock, String> {
    let summands = spec
        .summands
        .iter()
        .enumerate()
        .map(|(i, s)| convert_summand(s, &format!("{at}.summands[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    BuildingBlock::new(summands).map_err(|e| format!("{at}: {e}"))
}

fn convert_summand(spec: &SummandSpec, at: &str) -> Result<Summand, String> {
    let rank = spec.unit_rank.value(&format!("{at}.unit_rank"))?;
    match (&spec.space.sphere_factors, &spec.space.cw_dim) {
        (Some(n), None) => {
            let n = n.value(&format!("{at}.space.sphere_factors"))?;
            Summand::sphere(n, rank).map_err(|e| format!("{at}: {e}"))
        }
        (None, Some(d)) => {
            let d = d.value(&format!("{at}.space.cw_dim"))?;
            Summand::cw(d, rank).map_err(|e| format!("{at}: {e}"))
        }
        _ => Err(format!("{at}.space: exactly one of \"sphere_factors\", \"cw_dim\"")),
    }
}

fn convert_map(spec: &MapSpec, at: &str) -> Result<BlockMap, String> {
    let targets = spec
        .targets
        .iter()
        .enumerate()
        .map(|(t, list)| {
            list.iter()
                .enumerate()
                .map(|(e, ev)| convert_eigenvalue(ev, &format!("{at}.targets[{t}][{e}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    BlockMap::new(targets).map_err(|e| format!("{at}: {e}"))
}

fn convert_eigenvalue(spec: &EigenvalueSpec, at: &str) -> Result<EigenvalueMap, String> {
    match (&spec.proj, &spec.eval) {
        (Some(p), None) => {
            let embedding = match (&p.embedding.block_offset, &p.embedding.coords) {
                (Some(off), None) => CoordEmbedding::Block {
                    offset: off.value(&format!("{at}.proj.embedding.block_offset"))?,
                },
                (None, Some(coords)) => CoordEmbedding::Explicit(coords.clone()),
                _ => {
                    return Err(format!(
                        "{at}.proj.embedding: exactly one of \"block_offset\", \"coords\""
                    ))
                }
            };
            Ok(EigenvalueMap::Proj { source: p.source, embedding })
        }
        (None, Some(e)) => Ok(EigenvalueMap::Eval { source: e.source, point: e.point.clone() }),
        _ => Err(format!("{at}: exactly one of \"proj\", \"eval\"")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivityInput {
    pub n_factors: IntField,
    pub classes: Vec<ClassSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub trivial: Option<IntField>,
    pub line_sum: Option<LineSumSpec>,
    pub terms: Option<Vec<TermSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSumSpec {
    pub p_count: IntField,
    pub trivial_offset: IntField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    /// 1-based sphere-factor indices.
    pub subset: Vec<u32>,
    pub coeff: IntField,
}

/// Either form a class can take in an input file.
pub enum ParsedClass {
    Structured(StructuredClass),
    Dense(KClass),
}

pub fn convert_class(
    spec: &ClassSpec,
    n_factors: &BigInt,
    at: &str,
) -> Result<ParsedClass, String> {
    match (&spec.trivial, &spec.line_sum, &spec.terms) {
        (Some(r), None, None) => {
            let r = r.value(&format!("{at}.trivial"))?;
            Ok(ParsedClass::Structured(StructuredClass::trivial(r)))
        }
        (None, Some(ls), None) => {
            let p = ls.p_count.value(&format!("{at}.line_sum.p_count"))?;
            let off = ls.trivial_offset.value(&format!("{at}.line_sum.trivial_offset"))?;
            StructuredClass::line_sum(p, off)
                .map(ParsedClass::Structured)
                .map_err(|e| format!("{at}.line_sum: {e}"))
        }
        (None, None, Some(terms)) => {
            let cap = dense_factor_cap();
            let n = usize::try_from(n_factors.clone())
                .map_err(|_| format!("{at}: n_factors too large for a dense class"))?;
            if n > cap {
                return Err(format!(
                    "{at}: dense classes are capped at {cap} factors \
                     (raise DIMRANK_MAX_DENSE_FACTORS to override)"
                ));
            }
            let terms = terms
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let subset = Subset::from_indices(t.subset.iter().copied())
                        .ok_or(format!("{at}.terms[{i}].subset: indices must be in 1..=63"))?;
                    let coeff = t.coeff.value(&format!("{at}.terms[{i}].coeff"))?;
                    Ok::<_, String>((subset, coeff))
                })
                .collect::<Result<Vec<_>, _>>()?;
            KClass::from_terms(n, terms).map(ParsedClass::Dense).map_err(|e| format!("{at}: {e}"))
        }
        _ => Err(format!("{at}: exactly one of \"trivial\", \"line_sum\", \"terms\"")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareInput {
    pub model: ModelSpec,
    #[serde(default)]
    pub pairs: Vec<(Vec<IntField>, Vec<IntField>)>,
    pub interpolation: Option<InterpolationSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub sphere_even: Option<SphereEvenSpec>,
    pub sphere_product: Option<SphereProductSpec>,
    pub orthant: Option<OrthantSpec>,
    pub semigroup: Option<SemigroupSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereEvenSpec {
    pub half_dim: u64,
    pub unit_rank: IntField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereProductSpec {
    pub n_factors: usize,
    pub unit_rank: IntField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthantSpec {
    pub unit: Vec<IntField>,
    pub rank_functional: Option<Vec<IntField>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupSpec {
    pub generators: Vec<Vec<IntField>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolationSpec {
    pub x1: Vec<IntField>,
    pub x2: Vec<IntField>,
    pub y1: Vec<IntField>,
    pub y2: Vec<IntField>,
    pub box_bound: u64,
}

pub fn convert_model(spec: &ModelSpec) -> Result<OrderedGroupModel, String> {
    match (&spec.sphere_even, &spec.sphere_product, &spec.orthant, &spec.semigroup) {
        (Some(s), None, None, None) => {
            let rank = s.unit_rank.value("model.sphere_even.unit_rank")?;
            SphereEvenModel::new(s.half_dim, rank)
                .map(OrderedGroupModel::SphereEven)
                .map_err(|e| format!("model.sphere_even: {e}"))
        }
        (None, Some(s), None, None) => {
            let cap = dense_factor_cap();
            if s.n_factors > cap {
                return Err(format!(
                    "model.sphere_product: capped at {cap} factors \
                     (raise DIMRANK_MAX_DENSE_FACTORS to override)"
                ));
            }
            let rank = s.unit_rank.value("model.sphere_product.unit_rank")?;
            FreeWithOracle::sphere_product(s.n_factors, rank)
                .map(OrderedGroupModel::Free)
                .map_err(|e| format!("model.sphere_product: {e}"))
        }
        (None, None, Some(o), None) => {
            let unit = int_list(&o.unit, "model.orthant.unit")?;
            let d = unit.len();
            let rank_functional = match &o.rank_functional {
                Some(f) => {
                    let f = int_list(f, "model.orthant.rank_functional")?;
                    if f.len() != d {
                        return Err("model.orthant.rank_functional: arity mismatch".into());
                    }
                    Some(f)
                }
                None => Some(vec![BigInt::from(1); d]),
            };
            Ok(OrderedGroupModel::Free(FreeWithOracle {
                d,
                oracle: ConeOracle::NonNegOrthant,
                unit,
                rank_functional,
            }))
        }
        (None, None, None, Some(s)) => {
            let generators = s
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| int_list(g, &format!("model.semigroup.generators[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let d = generators.first().map(Vec::len).unwrap_or(0);
            let sg = ConcreteSemigroup::new(d, generators)
                .map_err(|e| format!("model.semigroup: {e}"))?;
            grothendieck_envelope(&sg)
                .map(OrderedGroupModel::Free)
                .map_err(|e| format!("model.semigroup: {e}"))
        }
        _ => Err(
            "model: exactly one of \"sphere_even\", \"sphere_product\", \"orthant\", \"semigroup\""
                .into(),
        ),
    }
}

pub fn convert_pairs(
    pairs: &[(Vec<IntField>, Vec<IntField>)],
) -> Result<Vec<(Vec<BigInt>, Vec<BigInt>)>, String> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            Ok((
                int_list(x, &format!("pairs[{i}][0]"))?,
                int_list(y, &format!("pairs[{i}][1]"))?,
            ))
        })
        .collect()
}

pub fn convert_vec(fields: &[IntField], at: &str) -> Result<Vec<BigInt>, String> {
    int_list(fields, at)
}
