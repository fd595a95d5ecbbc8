//! Finite integer alphabets and per-level support profiles.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must satisfy lower <= 0 <= upper, got {lower}..={upper}")]
    ZeroNotContained { lower: i32, upper: i32 },
    #[error("alphabet needs at least two levels, got {lower}..={upper}")]
    TooSmall { lower: i32, upper: i32 },
    #[error("level {level} is not in the alphabet {lower}..={upper}")]
    LevelOutOfRange { level: i32, lower: i32, upper: i32 },
    #[error("support counts sum to {total}, ambient dimension is only {n}")]
    CountsExceedDimension { total: usize, n: usize },
    #[error("invalid alphabet spec `{0}`, expected LO:HI with integers")]
    ParseError(String),
}

/// A contiguous integer alphabet `{lower, ..., upper}` containing zero.
///
/// `{0, ..., L}` (or its reflection `{-L, ..., 0}`) is *unipolar*; an
/// alphabet with zero strictly inside is *bipolar*. The placement of
/// zero decides which recovery program and which transition curve apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    lower: i32,
    upper: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Unipolar,
    Bipolar,
}

impl Alphabet {
    pub fn new(lower: i32, upper: i32) -> Result<Self, AlphabetError> {
        if lower > 0 || upper < 0 {
            return Err(AlphabetError::ZeroNotContained { lower, upper });
        }
        if upper - lower < 1 {
            return Err(AlphabetError::TooSmall { lower, upper });
        }
        Ok(Alphabet { lower, upper })
    }

    pub fn lower(&self) -> i32 {
        self.lower
    }

    pub fn upper(&self) -> i32 {
        self.upper
    }

    pub fn cardinality(&self) -> usize {
        (self.upper - self.lower + 1) as usize
    }

    /// Unipolar iff zero sits on the boundary of the range.
    pub fn polarity(&self) -> Polarity {
        if self.lower == 0 || self.upper == 0 {
            Polarity::Unipolar
        } else {
            Polarity::Bipolar
        }
    }

    pub fn contains(&self, level: i32) -> bool {
        (self.lower..=self.upper).contains(&level)
    }

    /// Endpoints of the convex hull, i.e. the box for the relaxed program.
    pub fn hull(&self) -> (f64, f64) {
        (f64::from(self.lower), f64::from(self.upper))
    }

    /// The coordinate-negated alphabet `{-upper, ..., -lower}`.
    ///
    /// A unipolar alphabet `{-L, ..., 0}` reflects onto `{0, ..., L}`,
    /// which lets every unipolar code path assume a nonnegative range.
    pub fn reflected(&self) -> Alphabet {
        Alphabet {
            lower: -self.upper,
            upper: -self.lower,
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = i32> {
        self.lower..=self.upper
    }

    /// Parses the `LO:HI` flag syntax, e.g. `0:1`, `-1:1`, `-2:3`.
    pub fn parse(spec: &str) -> Result<Self, AlphabetError> {
        let err = || AlphabetError::ParseError(spec.to_string());
        let (lo, hi) = spec.split_once(':').ok_or_else(err)?;
        let lower: i32 = lo.trim().parse().map_err(|_| err())?;
        let upper: i32 = hi.trim().parse().map_err(|_| err())?;
        Alphabet::new(lower, upper)
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lower, self.upper)
    }
}

/// How many coordinates of an N-dimensional signal sit at each alphabet
/// level. The zero count is implicit: `n` minus the stored counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportProfile {
    n: usize,
    counts: BTreeMap<i32, usize>,
}

impl SupportProfile {
    /// `counts` lists (level, count) pairs for the nonzero levels to use.
    pub fn new(
        alphabet: &Alphabet,
        n: usize,
        counts: &[(i32, usize)],
    ) -> Result<Self, AlphabetError> {
        let mut map = BTreeMap::new();
        for &(level, count) in counts {
            if !alphabet.contains(level) {
                return Err(AlphabetError::LevelOutOfRange {
                    level,
                    lower: alphabet.lower,
                    upper: alphabet.upper,
                });
            }
            if level != 0 && count > 0 {
                *map.entry(level).or_insert(0) += count;
            }
        }
        let total: usize = map.values().sum();
        if total > n {
            return Err(AlphabetError::CountsExceedDimension { total, n });
        }
        Ok(SupportProfile { n, counts: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, level: i32) -> usize {
        if level == 0 {
            self.zero_count()
        } else {
            self.counts.get(&level).copied().unwrap_or(0)
        }
    }

    /// Support size k = number of nonzero coordinates.
    pub fn support_size(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn zero_count(&self) -> usize {
        self.n - self.support_size()
    }

    /// Nonzero entries that are not at an extreme alphabet level.
    ///
    /// For a unipolar range this is k minus the count at the far end;
    /// for a bipolar range both extremes are excluded.
    pub fn interior_count(&self, alphabet: &Alphabet) -> usize {
        let k = self.support_size();
        match alphabet.polarity() {
            Polarity::Unipolar => {
                let extreme = if alphabet.upper() > 0 {
                    alphabet.upper()
                } else {
                    alphabet.lower()
                };
                k - self.count(extreme)
            }
            Polarity::Bipolar => k - self.count(alphabet.lower()) - self.count(alphabet.upper()),
        }
    }

    pub fn nonzero_counts(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }
}

/// A signal over an integer alphabet, kept in exact integer form so that
/// rounding and exact-recovery tests do not depend on float comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signal {
    pub levels: Vec<i32>,
}

impl Signal {
    pub fn new(levels: Vec<i32>) -> Self {
        Signal { levels }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn values(&self) -> DVector<f64> {
        DVector::from_iterator(self.levels.len(), self.levels.iter().map(|&l| f64::from(l)))
    }

    pub fn norm0(&self) -> usize {
        self.levels.iter().filter(|&&l| l != 0).count()
    }

    pub fn norm1(&self) -> f64 {
        self.levels.iter().map(|&l| f64::from(l).abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(Alphabet::new(0, 1).unwrap().polarity(), Polarity::Unipolar);
        assert_eq!(Alphabet::new(-3, 0).unwrap().polarity(), Polarity::Unipolar);
        assert_eq!(Alphabet::new(-1, 1).unwrap().polarity(), Polarity::Bipolar);
        assert_eq!(Alphabet::new(-2, 3).unwrap().polarity(), Polarity::Bipolar);
    }

    #[test]
    fn rejects_degenerate_ranges() {
        assert!(Alphabet::new(0, 0).is_err());
        assert!(Alphabet::new(1, 3).is_err());
        assert!(Alphabet::new(-2, -1).is_err());
        assert!(Alphabet::new(3, 1).is_err());
    }

    #[test]
    fn hull_endpoints() {
        assert_eq!(Alphabet::new(0, 1).unwrap().hull(), (0.0, 1.0));
        assert_eq!(Alphabet::new(-1, 1).unwrap().hull(), (-1.0, 1.0));
        assert_eq!(Alphabet::new(-2, 3).unwrap().hull(), (-2.0, 3.0));
    }

    #[test]
    fn hull_contains_every_level() {
        for (lo, hi) in [(0, 5), (-3, 0), (-2, 4)] {
            let a = Alphabet::new(lo, hi).unwrap();
            let (l, u) = a.hull();
            for level in a.levels() {
                assert!(l <= f64::from(level) && f64::from(level) <= u);
            }
        }
    }

    #[test]
    fn reflection() {
        let a = Alphabet::new(-3, 0).unwrap();
        let r = a.reflected();
        assert_eq!((r.lower(), r.upper()), (0, 3));
        assert_eq!(r.polarity(), Polarity::Unipolar);
    }

    #[test]
    fn profile_counts() {
        let a = Alphabet::new(0, 2).unwrap();
        let p = SupportProfile::new(&a, 100, &[(1, 3), (2, 7)]).unwrap();
        assert_eq!(p.support_size(), 10);
        assert_eq!(p.zero_count(), 90);
        assert_eq!(p.interior_count(&a), 3);

        let b = Alphabet::new(-1, 1).unwrap();
        let q = SupportProfile::new(&b, 5, &[(1, 2), (-1, 1)]).unwrap();
        assert_eq!(q.support_size(), 3);
        assert_eq!(q.interior_count(&b), 0);
    }

    #[test]
    fn profile_rejects_overflow_and_foreign_levels() {
        let a = Alphabet::new(0, 1).unwrap();
        assert!(SupportProfile::new(&a, 3, &[(1, 4)]).is_err());
        assert!(SupportProfile::new(&a, 3, &[(2, 1)]).is_err());
    }

    #[test]
    fn parse_flag_syntax() {
        assert_eq!(Alphabet::parse("0:1").unwrap(), Alphabet::new(0, 1).unwrap());
        assert_eq!(
            Alphabet::parse("-2:3").unwrap(),
            Alphabet::new(-2, 3).unwrap()
        );
        assert!(Alphabet::parse("1-2").is_err());
        assert!(Alphabet::parse("a:b").is_err());
    }
}
