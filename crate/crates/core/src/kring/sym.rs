use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use super::dense::KClass;
use super::subset::Subset;
use super::{RingError, MAX_DENSE_FACTORS};

/// A symmetric element of `K^0((S^2)^n)` in compressed form.
///
/// A class invariant under all coordinate permutations is determined by one
/// coefficient per monomial size: `by_size[k]` is the common coefficient of
/// every size-`k` subset. This stays linear in `n` where the dense form is
/// exponential, but still materializes `n + 1` entries; truly Villadsen-size
/// classes use [`StructuredClass`](super::StructuredClass) instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymKClass {
    n: usize,
    by_size: Vec<BigInt>,
}

impl SymKClass {
    /// `by_size` must have exactly `n + 1` entries.
    pub fn new(n: usize, by_size: Vec<BigInt>) -> Result<SymKClass, RingError> {
        if by_size.len() != n + 1 {
            return Err(RingError::SymmetricArity { expected: n + 1, got: by_size.len() });
        }
        Ok(SymKClass { n, by_size })
    }

    pub fn zero(n: usize) -> SymKClass {
        SymKClass { n, by_size: vec![BigInt::zero(); n + 1] }
    }

    pub fn n_factors(&self) -> usize {
        self.n
    }

    pub fn by_size(&self) -> &[BigInt] {
        &self.by_size
    }

    pub fn rank(&self) -> BigInt {
        self.by_size[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.by_size.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &SymKClass) -> Result<SymKClass, RingError> {
        if self.n != other.n {
            return Err(RingError::DimensionMismatch { left: self.n, right: other.n });
        }
        let by_size = self
            .by_size
            .iter()
            .zip(&other.by_size)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SymKClass { n: self.n, by_size })
    }

    pub fn scale(&self, k: &BigInt) -> SymKClass {
        SymKClass { n: self.n, by_size: self.by_size.iter().map(|v| v * k).collect() }
    }

    /// Truncated product in compressed form.
    ///
    /// A size-`k` union splits into a disjoint (size-`i`, size-`j`) pair in
    /// `C(k, i)` ways, so `(a * b)_k = sum_{i+j=k} C(k, i) a_i b_j`, with
    /// sizes above `n` truncated away.
    pub fn mul(&self, other: &SymKClass) -> Result<SymKClass, RingError> {
        if self.n != other.n {
            return Err(RingError::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut by_size = vec![BigInt::zero(); self.n + 1];
        for (k, out) in by_size.iter_mut().enumerate() {
            for i in 0..=k {
                let c = binomial(BigInt::from(k), BigInt::from(i));
                *out += c * &self.by_size[i] * &other.by_size[k - i];
            }
        }
        Ok(SymKClass { n: self.n, by_size })
    }

    /// Dense expansion; requires the dense factor bound.
    pub fn expand(&self) -> Result<KClass, RingError> {
        if self.n > MAX_DENSE_FACTORS {
            return Err(RingError::TooManyFactors { n: self.n });
        }
        let full = Subset::full(self.n);
        KClass::from_terms(
            self.n,
            full.submasks()
                .map(|s| (s, self.by_size[s.size() as usize].clone())),
        )
    }

    /// Compression of a dense class; errors when any two same-size subsets
    /// carry different coefficients.
    ///
    /// Only the support is visited: a size with fewer stored terms than
    /// `C(n, k)` has an implicit zero coefficient, which must then be the
    /// common value for that size.
    pub fn compress(class: &KClass) -> Result<SymKClass, RingError> {
        let n = class.n_factors();
        let mut by_size: Vec<Option<BigInt>> = vec![None; n + 1];
        let mut count = vec![0u128; n + 1];
        for (s, v) in class.terms() {
            let k = s.size() as usize;
            count[k] += 1;
            match &by_size[k] {
                None => by_size[k] = Some(v.clone()),
                Some(seen) if seen == v => {}
                Some(seen) => {
                    return Err(RingError::NotSymmetric {
                        size: k,
                        first: seen.clone(),
                        second: v.clone(),
                    })
                }
            }
        }
        let mut out = Vec::with_capacity(n + 1);
        for (k, entry) in by_size.into_iter().enumerate() {
            match entry {
                None => out.push(BigInt::zero()),
                Some(v) => {
                    let total = binomial(BigInt::from(n), BigInt::from(k));
                    if BigInt::from(count[k]) != total && !v.is_zero() {
                        return Err(RingError::NotSymmetric {
                            size: k,
                            first: v,
                            second: BigInt::zero(),
                        });
                    }
                    out.push(v);
                }
            }
        }
        Ok(SymKClass { n, by_size: out })
    }
}
