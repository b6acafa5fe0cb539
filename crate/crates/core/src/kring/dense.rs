use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::subset::Subset;
use super::{CoordEmbedding, RingError, MAX_DENSE_FACTORS};

/// Shared arithmetic on square-free coefficient maps.
///
/// Both `K^0((S^2)^n)` and `H^even((S^2)^n; Z)` are truncated polynomial
/// rings `Z[x_1..x_n]/(x_i^2)`, so one coefficient-map core serves both.
/// Maps never store zero coefficients.
pub(super) mod poly {
    use super::*;

    pub fn add_term(map: &mut BTreeMap<Subset, BigInt>, s: Subset, v: BigInt) {
        if v.is_zero() {
            return;
        }
        match map.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(a: &BTreeMap<Subset, BigInt>, b: &BTreeMap<Subset, BigInt>) -> BTreeMap<Subset, BigInt> {
        let mut out = a.clone();
        for (s, v) in b {
            add_term(&mut out, *s, v.clone());
        }
        out
    }

    pub fn neg(a: &BTreeMap<Subset, BigInt>) -> BTreeMap<Subset, BigInt> {
        a.iter().map(|(s, v)| (*s, -v)).collect()
    }

    pub fn scale(a: &BTreeMap<Subset, BigInt>, k: &BigInt) -> BTreeMap<Subset, BigInt> {
        if k.is_zero() {
            return BTreeMap::new();
        }
        a.iter().map(|(s, v)| (*s, v * k)).collect()
    }

    /// Truncated product: `(a * b)_U = sum over disjoint S, T with S u T = U`.
    ///
    /// Overlapping pairs vanish because every generator squares to zero.
    /// Chooses between the all-pairs loop and complement-submask enumeration
    /// by estimated cost; both are exact.
    pub fn mul(n: usize, a: &BTreeMap<Subset, BigInt>, b: &BTreeMap<Subset, BigInt>) -> BTreeMap<Subset, BigInt> {
        let mut out = BTreeMap::new();
        if a.is_empty() || b.is_empty() {
            return out;
        }
        let full = Subset::full(n);
        let pair_cost = (a.len() as u128) * (b.len() as u128);
        let submask_cost: u128 = a
            .keys()
            .map(|s| 1u128 << (n as u32 - s.size()))
            .fold(0u128, u128::saturating_add);
        if pair_cost <= submask_cost {
            for (s, va) in a {
                for (t, vb) in b {
                    if s.is_disjoint(*t) {
                        add_term(&mut out, s.union(*t), va * vb);
                    }
                }
            }
        } else {
            for (s, va) in a {
                for t in full.difference(*s).submasks() {
                    if let Some(vb) = b.get(&t) {
                        add_term(&mut out, s.union(t), va * vb);
                    }
                }
            }
        }
        out
    }

    pub fn support_coords(a: &BTreeMap<Subset, BigInt>) -> Subset {
        a.keys().fold(Subset::EMPTY, |acc, s| acc.union(*s))
    }

    pub fn validate_keys(n: usize, a: &BTreeMap<Subset, BigInt>) -> Result<(), RingError> {
        let full = Subset::full(n);
        for s in a.keys() {
            if !s.is_subset_of(full) {
                return Err(RingError::CoordinateOutOfRange {
                    coordinate: s.indices().find(|&i| !full.contains(i)).unwrap_or(0),
                    n_factors: n,
                });
            }
        }
        Ok(())
    }

    pub fn fmt_terms(
        f: &mut fmt::Formatter<'_>,
        coeffs: &BTreeMap<Subset, BigInt>,
        var: &str,
    ) -> fmt::Result {
        if coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, v)) in coeffs.iter().enumerate() {
            let mag = v.abs();
            if k == 0 {
                if v.is_negative() {
                    write!(f, "-")?;
                }
            } else if v.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one();
            if s.is_empty() || !unit_coeff {
                write!(f, "{mag}")?;
            }
            for (j, i) in s.indices().enumerate() {
                if j > 0 || !unit_coeff {
                    write!(f, "*")?;
                }
                write!(f, "{var}{i}")?;
            }
        }
        Ok(())
    }
}

fn check_dims(left: usize, right: usize) -> Result<(), RingError> {
    if left == right {
        Ok(())
    } else {
        Err(RingError::DimensionMismatch { left, right })
    }
}

fn check_factor_bound(n: usize) -> Result<(), RingError> {
    if n <= MAX_DENSE_FACTORS {
        Ok(())
    } else {
        Err(RingError::TooManyFactors { n })
    }
}

/// An element of `K^0((S^2)^n)` in the dense basis.
///
/// Writing `t_i` for the reduced Bott class of the `i`-th sphere factor,
/// the ring is `Z[t_1..t_n]/(t_i^2)` and a class is the map from square-free
/// monomials (subsets of `{1..n}`) to integer coefficients. The coefficient
/// of the empty set is the virtual rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KClass {
    n: usize,
    coeffs: BTreeMap<Subset, BigInt>,
}

impl KClass {
    pub fn zero(n: usize) -> Result<KClass, RingError> {
        check_factor_bound(n)?;
        Ok(KClass { n, coeffs: BTreeMap::new() })
    }

    /// `r * [theta_1]`: the rank-`r` trivial class.
    pub fn constant(n: usize, r: impl Into<BigInt>) -> Result<KClass, RingError> {
        let mut c = KClass::zero(n)?;
        poly::add_term(&mut c.coeffs, Subset::EMPTY, r.into());
        Ok(c)
    }

    /// The reduced Bott class `t_i` of coordinate `i`.
    pub fn bott(n: usize, i: u32) -> Result<KClass, RingError> {
        check_factor_bound(n)?;
        let full = Subset::full(n);
        let s = Subset::singleton(i).filter(|s| s.is_subset_of(full)).ok_or(
            RingError::CoordinateOutOfRange { coordinate: i, n_factors: n },
        )?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, BigInt::one());
        Ok(KClass { n, coeffs })
    }

    /// `[L_S] = prod_{i in S} (1 + t_i)`: the class of the line bundle with
    /// Bott generator on each coordinate of `S`. Every subset of `S` appears
    /// with coefficient one.
    pub fn line_bundle(n: usize, s: Subset) -> Result<KClass, RingError> {
        check_factor_bound(n)?;
        if !s.is_subset_of(Subset::full(n)) {
            return Err(RingError::CoordinateOutOfRange {
                coordinate: s.indices().last().unwrap_or(0),
                n_factors: n,
            });
        }
        let coeffs = s.submasks().map(|t| (t, BigInt::one())).collect();
        Ok(KClass { n, coeffs })
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<KClass, RingError>
    where
        I: IntoIterator<Item = (Subset, BigInt)>,
    {
        let mut c = KClass::zero(n)?;
        for (s, v) in terms {
            poly::add_term(&mut c.coeffs, s, v);
        }
        poly::validate_keys(n, &c.coeffs)?;
        Ok(c)
    }

    pub fn n_factors(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Virtual rank: the coefficient of the empty monomial.
    pub fn rank(&self) -> BigInt {
        self.coeff(Subset::EMPTY)
    }

    pub fn coeff(&self, s: Subset) -> BigInt {
        self.coeffs.get(&s).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &BigInt)> {
        self.coeffs.iter().map(|(s, v)| (*s, v))
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    /// Union of all coordinates appearing in a nonzero monomial.
    pub fn support_coords(&self) -> Subset {
        poly::support_coords(&self.coeffs)
    }

    /// Number of sphere factors the class genuinely depends on.
    pub fn effective_factor_count(&self) -> u32 {
        self.support_coords().size()
    }

    pub fn add(&self, other: &KClass) -> Result<KClass, RingError> {
        check_dims(self.n, other.n)?;
        Ok(KClass { n: self.n, coeffs: poly::add(&self.coeffs, &other.coeffs) })
    }

    pub fn sub(&self, other: &KClass) -> Result<KClass, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KClass {
        KClass { n: self.n, coeffs: poly::neg(&self.coeffs) }
    }

    pub fn scale(&self, k: &BigInt) -> KClass {
        KClass { n: self.n, coeffs: poly::scale(&self.coeffs, k) }
    }

    pub fn mul(&self, other: &KClass) -> Result<KClass, RingError> {
        check_dims(self.n, other.n)?;
        Ok(KClass { n: self.n, coeffs: poly::mul(self.n, &self.coeffs, &other.coeffs) })
    }

    /// Relabels coordinates along an injective embedding into a ring with
    /// `target_n` factors. This is the map induced on `K^0` by the
    /// coordinate projection `(S^2)^target_n -> (S^2)^n` picking out the
    /// embedded coordinates.
    pub fn pullback(&self, target_n: usize, embedding: &CoordEmbedding) -> Result<KClass, RingError> {
        check_factor_bound(target_n)?;
        embedding.validate(self.n, target_n)?;
        let mut out = KClass::zero(target_n)?;
        for (s, v) in &self.coeffs {
            let image = embedding.apply_subset(*s)?;
            poly::add_term(&mut out.coeffs, image, v.clone());
        }
        Ok(out)
    }

}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        poly::fmt_terms(f, &self.coeffs, "t")
    }
}

/// An element of `H^even((S^2)^n; Z)`, graded by monomial size.
///
/// Same truncated-ring shape as [`KClass`], with `u_i` the orientation
/// generator of the `i`-th factor; `u_S = prod_{i in S} u_i` has degree
/// `2|S|`, and "degree `j`" below always means cohomological degree `2j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    n: usize,
    coeffs: BTreeMap<Subset, BigInt>,
}

impl CohClass {
    pub fn one(n: usize) -> Result<CohClass, RingError> {
        check_factor_bound(n)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Subset::EMPTY, BigInt::one());
        Ok(CohClass { n, coeffs })
    }

    pub fn n_factors(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, s: Subset) -> BigInt {
        self.coeffs.get(&s).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &BigInt)> {
        self.coeffs.iter().map(|(s, v)| (*s, v))
    }

    pub fn mul(&self, other: &CohClass) -> Result<CohClass, RingError> {
        check_dims(self.n, other.n)?;
        Ok(CohClass { n: self.n, coeffs: poly::mul(self.n, &self.coeffs, &other.coeffs) })
    }

    /// Largest `j` with a nonzero degree-`j` component, if any component is
    /// nonzero at all.
    pub fn top_nonvanishing_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|s| s.size()).max()
    }

    /// Smallest degree strictly above `floor` carrying a nonzero
    /// coefficient, together with a witness monomial.
    pub fn first_nonzero_above(&self, floor: u32) -> Option<(u32, Subset, BigInt)> {
        self.coeffs
            .iter()
            .filter(|(s, _)| s.size() > floor)
            .min_by_key(|(s, _)| (s.size(), s.mask()))
            .map(|(s, v)| (s.size(), *s, v.clone()))
    }

    pub(super) fn from_map(n: usize, coeffs: BTreeMap<Subset, BigInt>) -> CohClass {
        CohClass { n, coeffs }
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        poly::fmt_terms(f, &self.coeffs, "u")
    }
}
