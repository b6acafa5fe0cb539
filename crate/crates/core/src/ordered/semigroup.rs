use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::model::{ConeOracle, FreeWithOracle};
use super::ModelError;

/// A finitely generated submonoid of `N^d` given by its generators.
///
/// Membership of a vector is decidable by bounded search because every
/// generator is nonzero and componentwise nonnegative, so residuals shrink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteSemigroup {
    d: usize,
    generators: Vec<Vec<BigInt>>,
}

impl ConcreteSemigroup {
    pub fn new(d: usize, generators: Vec<Vec<BigInt>>) -> Result<ConcreteSemigroup, ModelError> {
        for g in &generators {
            if g.len() != d {
                return Err(ModelError::ElementArity { expected: d, got: g.len() });
            }
            if g.iter().any(|v| v.is_negative()) {
                return Err(ModelError::NegativeGenerator);
            }
            if g.iter().all(|v| v.is_zero()) {
                return Err(ModelError::ZeroGenerator);
            }
        }
        Ok(ConcreteSemigroup { d, generators })
    }

    pub fn ambient_rank(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// The sum of the generators. Hits every coordinate any generator hits,
    /// which makes it an order unit for the cone the semigroup generates.
    pub fn generator_sum(&self) -> Vec<BigInt> {
        let mut unit = vec![BigInt::zero(); self.d];
        for g in &self.generators {
            for (u, v) in unit.iter_mut().zip(g) {
                *u += v;
            }
        }
        unit
    }

    /// Whether `x` is a nonnegative integer combination of the generators.
    pub fn contains(&self, x: &[BigInt]) -> Result<bool, ModelError> {
        if x.len() != self.d {
            return Err(ModelError::ElementArity { expected: self.d, got: x.len() });
        }
        if x.iter().any(|v| v.is_negative()) {
            return Ok(false);
        }
        let mut memo: HashMap<Vec<BigInt>, bool> = HashMap::new();
        Ok(self.search(x.to_vec(), &mut memo))
    }

    fn search(&self, residual: Vec<BigInt>, memo: &mut HashMap<Vec<BigInt>, bool>) -> bool {
        if residual.iter().all(|v| v.is_zero()) {
            return true;
        }
        if let Some(&hit) = memo.get(&residual) {
            return hit;
        }
        // Each generator is nonzero, so every step strictly decreases the
        // coordinate sum and the recursion terminates.
        let mut hit = false;
        for g in &self.generators {
            let mut next = residual.clone();
            let mut ok = true;
            for (r, v) in next.iter_mut().zip(g) {
                *r -= v;
                if r.is_negative() {
                    ok = false;
                    break;
                }
            }
            if ok && self.search(next, memo) {
                hit = true;
                break;
            }
        }
        memo.insert(residual, hit);
        hit
    }
}

/// The ordered group a semigroup generates: ambient `Z^d`, cone decided by
/// semigroup membership, unit the generator sum, state the coordinate sum
/// normalized by the unit.
pub fn grothendieck_envelope(s: &ConcreteSemigroup) -> Result<FreeWithOracle, ModelError> {
    let unit = s.generator_sum();
    if unit.iter().all(|v| v.is_zero()) {
        return Err(ModelError::DegenerateUnit);
    }
    let d = s.ambient_rank();
    Ok(FreeWithOracle {
        d,
        oracle: ConeOracle::Semigroup(s.clone()),
        unit,
        rank_functional: Some(vec![BigInt::from(1); d]),
    })
}
