/// Outcome of a decision procedure that is allowed to abstain.
///
/// `Unknown` is never treated as a failure by any checker in this crate; it
/// marks questions the implemented criteria cannot settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trilean {
    True,
    False,
    Unknown,
}

impl Trilean {
    pub fn is_true(self) -> bool {
        self == Trilean::True
    }

    pub fn is_false(self) -> bool {
        self == Trilean::False
    }

    pub fn is_unknown(self) -> bool {
        self == Trilean::Unknown
    }

    /// Three-valued conjunction: any `False` wins, else any `Unknown`.
    pub fn and(self, other: Trilean) -> Trilean {
        use Trilean::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (Unknown, _) | (_, Unknown) => Unknown,
            (True, True) => True,
        }
    }

    pub fn from_bool(b: bool) -> Trilean {
        if b {
            Trilean::True
        } else {
            Trilean::False
        }
    }
}
