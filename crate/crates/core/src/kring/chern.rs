use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::dense::{poly, CohClass, KClass};
use super::subset::Subset;
use super::RingError;

/// Coordinates of a class in the line-bundle basis `{[L_S]}`.
///
/// `[L_S] = prod_{i in S} (1 + t_i)` ranges over all subsets, and expanding
/// gives `a_T = sum_{S >= T} alpha_S`; Moebius inversion over the subset
/// lattice recovers `alpha_S = sum_{T >= S} (-1)^{|T \ S|} a_T`. The result
/// omits zero coordinates.
pub fn line_basis_decompose(a: &KClass) -> BTreeMap<Subset, BigInt> {
    let mut alpha = BTreeMap::new();
    for (t, v) in a.terms() {
        for s in t.submasks() {
            let sign_flip = (t.size() - s.size()) % 2 == 1;
            poly::add_term(&mut alpha, s, if sign_flip { -v } else { v.clone() });
        }
    }
    alpha
}

/// Reassembles `sum_S alpha_S * [L_S]` as a dense class.
pub fn from_line_basis(n: usize, alpha: &BTreeMap<Subset, BigInt>) -> Result<KClass, RingError> {
    let mut terms = BTreeMap::new();
    for (s, v) in alpha {
        for t in s.submasks() {
            poly::add_term(&mut terms, t, v.clone());
        }
    }
    KClass::from_terms(n, terms)
}

/// `m * (m - 1) * ... * (m - k + 1)`.
fn falling_factorial(m: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= m - BigInt::from(j);
    }
    acc
}

/// `(1 + u_{i_1} + ... + u_{i_k})^e` over the coordinates of `s`, truncated.
///
/// Squares of generators vanish, so `(sum u_i)^j = j! * e_j(u)` and the
/// binomial series collapses to `sum_{T <= s} (e)_{|T|} u_T` with a falling
/// factorial, valid for negative `e` as well (the base is a unit).
fn line_power(s: Subset, e: &BigInt) -> BTreeMap<Subset, BigInt> {
    let mut out = BTreeMap::new();
    for t in s.submasks() {
        poly::add_term(&mut out, t, falling_factorial(e, t.size()));
    }
    out
}

/// Total Chern class of a virtual class, via the line-bundle basis.
///
/// Decomposing `a = sum alpha_S [L_S]`, the Whitney formula gives
/// `c(a) = prod_S c(L_S)^{alpha_S}` with `c(L_S) = 1 + sum_{i in S} u_i`.
/// Exactness: negative exponents are legitimate because each factor is a
/// unit of the truncated ring.
pub fn total_chern(a: &KClass) -> Result<CohClass, RingError> {
    let n = a.n_factors();
    let alpha = line_basis_decompose(a);
    let mut acc: BTreeMap<Subset, BigInt> = BTreeMap::new();
    acc.insert(Subset::EMPTY, BigInt::one());
    for (s, e) in &alpha {
        if s.is_empty() {
            // c of a trivial summand is 1 at any multiplicity.
            continue;
        }
        acc = poly::mul(n, &acc, &line_power(*s, e));
    }
    Ok(CohClass::from_map(n, acc))
}
