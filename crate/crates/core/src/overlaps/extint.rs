use core::fmt;
use core::ops::{Add, Sub};

/// Integers extended by `±∞`. Infinities absorb finite summands; the mixed sum
/// `+∞ + -∞` never arises in the bound formulas and is taken to be `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtInt {
    /// `(min, max)` of the values, `(+∞, -∞)` when there are none.
    pub fn range(values: impl IntoIterator<Item = usize>) -> (ExtInt, ExtInt) {
        values.into_iter().fold((ExtInt::PosInf, ExtInt::NegInf), |(lo, hi), v| {
            let v = ExtInt::Finite(v as i64);
            (lo.min(v), hi.max(v))
        })
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Finite(v)
    }
}

impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        use ExtInt::*;
        match (self, rhs) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: i64) -> ExtInt {
        self + ExtInt::Finite(rhs)
    }
}

impl Sub<i64> for ExtInt {
    type Output = ExtInt;
    fn sub(self, rhs: i64) -> ExtInt {
        self + ExtInt::Finite(-rhs)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

/// A closed interval of extended integers; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: ExtInt,
    pub hi: ExtInt,
}

impl Interval {
    pub fn new(lo: ExtInt, hi: ExtInt) -> Self {
        Self { lo, hi }
    }

    pub fn finite(lo: i64, hi: i64) -> Self {
        Self::new(ExtInt::Finite(lo), ExtInt::Finite(hi))
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= ExtInt::Finite(v) && ExtInt::Finite(v) <= self.hi
    }

    /// Every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi && self.lo.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("empty")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorbing_arithmetic() {
        assert_eq!(ExtInt::NegInf + 5, ExtInt::NegInf);
        assert_eq!(ExtInt::PosInf - 3, ExtInt::PosInf);
        assert_eq!(ExtInt::Finite(2) + ExtInt::Finite(3), ExtInt::Finite(5));
        assert!(ExtInt::NegInf < ExtInt::Finite(i64::MIN));
        assert_eq!(ExtInt::range([]), (ExtInt::PosInf, ExtInt::NegInf));
        assert_eq!(ExtInt::range([4, 2, 7]), (ExtInt::Finite(2), ExtInt::Finite(7)));
    }

    #[test]
    fn intervals() {
        let empty = Interval::new(ExtInt::PosInf, ExtInt::NegInf);
        assert!(empty.is_empty());
        assert!(empty.is_subset_of(&Interval::finite(3, 4)));
        assert!(Interval::finite(3, 3).is_subset_of(&Interval::finite(3, 4)));
        assert!(!Interval::finite(2, 3).is_subset_of(&Interval::finite(3, 4)));
        assert!(Interval::finite(3, 3).is_singleton());
    }
}
