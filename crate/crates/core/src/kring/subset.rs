use std::fmt;

/// A subset of the coordinate set `{1, ..., n}`, stored as a bitmask.
///
/// Coordinate `i` is present iff bit `i - 1` is set, so at most
/// [`MAX_DENSE_FACTORS`](crate::kring::MAX_DENSE_FACTORS) coordinates are
/// representable. Subsets index monomials `t_S = prod_{i in S} t_i` of the
/// truncated polynomial ring `Z[t_1..t_n]/(t_i^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u64) -> Subset {
        Subset(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Builds a subset from 1-based coordinate indices.
    ///
    /// Returns `None` if an index is `0` or exceeds the representable range.
    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Option<Subset> {
        let mut mask = 0u64;
        for i in indices {
            if i == 0 || i > 63 {
                return None;
            }
            mask |= 1 << (i - 1);
        }
        Some(Subset(mask))
    }

    pub fn singleton(i: u32) -> Option<Subset> {
        Subset::from_indices([i])
    }

    /// The full coordinate set `{1, ..., n}`.
    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= 63);
        if n == 0 {
            Subset(0)
        } else {
            Subset(u64::MAX >> (64 - n))
        }
    }

    pub fn contains(self, i: u32) -> bool {
        i >= 1 && i <= 63 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// 1-based indices of the members, ascending.
    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let tz = rest.trailing_zeros();
                rest &= rest - 1;
                Some(tz + 1)
            }
        })
    }

    /// All subsets of `self`, each exactly once, starting at `self` and
    /// ending at the empty set.
    pub fn submasks(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut cur = Some(mask);
        std::iter::from_fn(move || {
            let t = cur?;
            cur = if t == 0 { None } else { Some((t - 1) & mask) };
            Some(Subset(t))
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_enumeration_is_exhaustive() {
        let s = Subset::from_indices([1, 3, 4]).unwrap();
        let all: Vec<u64> = s.submasks().map(Subset::mask).collect();
        assert_eq!(all.len(), 8);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        for m in sorted {
            assert_eq!(m & !s.mask(), 0);
        }
    }

    #[test]
    fn indices_round_trip() {
        let s = Subset::from_indices([2, 5, 7]).unwrap();
        assert_eq!(s.indices().collect::<Vec<_>>(), vec![2, 5, 7]);
        assert_eq!(s.size(), 3);
        assert!(s.contains(5));
        assert!(!s.contains(1));
        assert_eq!(s.to_string(), "{2,5,7}");
    }

    #[test]
    fn full_set_edges() {
        assert_eq!(Subset::full(0), Subset::EMPTY);
        assert_eq!(Subset::full(3).mask(), 0b111);
        assert_eq!(Subset::full(63).size(), 63);
    }

    #[test]
    fn rejects_out_of_range_indices() {
        assert!(Subset::from_indices([0]).is_none());
        assert!(Subset::from_indices([64]).is_none());
    }
}
