//! Subsets of a small ground set `{0, .., n-1}` as bit vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest ground set a [`Subset`] can describe.
pub const MAX_BITS: usize = 32;

/// Largest ground set for operations that scan the whole subset lattice.
pub const MAX_LATTICE_GROUND: usize = 16;

/// A subset of `{0, .., n-1}` stored as its characteristic vector.
///
/// Ordering is the canonical one used for antichains: by cardinality
/// first, then by the bit-vector value.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_BITS);
        if n == MAX_BITS {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_BITS);
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_BITS && self.0 >> i & 1 == 1
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        assert!(i < MAX_BITS);
        Subset(self.0 | 1 << i)
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u32 << i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    #[must_use]
    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    #[must_use]
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    /// True when every member is `< n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(Subset::full(n))
    }

    /// Largest member plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        (u32::BITS - self.0.leading_zeros()) as usize
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// Every subset of `{0, .., n-1}` in increasing bit-vector order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(n < MAX_BITS);
        (0..1u32 << n).map(Subset)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.0.cmp(&other.0))
    }
}

pub struct SubsetIter(u32);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for SubsetIter {}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_indices(iter)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `{0,2,3}`, `0,2,3` or `{}`.
impl FromStr for Subset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = match (s.strip_prefix('{'), s.ends_with('}')) {
            (Some(rest), true) => &rest[..rest.len() - 1],
            (None, false) => s,
            _ => return Err(format!("unbalanced braces in `{s}`")),
        };
        let mut out = Subset::EMPTY;
        if inner.trim().is_empty() {
            return Ok(out);
        }
        for tok in inner.split(',') {
            let tok = tok.trim();
            let i: usize = tok
                .parse()
                .map_err(|_| format!("`{tok}` is not an element index"))?;
            if i >= MAX_BITS {
                return Err(format!("element {i} exceeds the {MAX_BITS}-point limit"));
            }
            out = out.with(i);
        }
        Ok(out)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        let mut out = Subset::EMPTY;
        for i in items {
            if i >= MAX_BITS {
                return Err(serde::de::Error::custom(format!(
                    "element {i} exceeds the {MAX_BITS}-point limit"
                )));
            }
            out = out.with(i);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_cardinality_then_value() {
        let mut v = [
            Subset::from_indices([0, 1]),
            Subset::from_indices([2]),
            Subset::from_indices([0]),
            Subset::from_indices([1, 2]),
        ];
        v.sort();
        assert_eq!(
            v.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            ["{0}", "{2}", "{0,1}", "{1,2}"]
        );
    }

    #[test]
    fn parse_forms() {
        assert_eq!("{0,2}".parse::<Subset>().unwrap(), Subset::from_bits(0b101));
        assert_eq!(" 1, 3 ".parse::<Subset>().unwrap(), Subset::from_bits(0b1010));
        assert_eq!("{}".parse::<Subset>().unwrap(), Subset::EMPTY);
        assert!("{1,".parse::<Subset>().is_err());
        assert!("{40}".parse::<Subset>().is_err());
        assert!("{a}".parse::<Subset>().is_err());
    }

    #[test]
    fn complement_and_span() {
        let s = Subset::from_indices([0, 3]);
        assert_eq!(s.complement(4), Subset::from_indices([1, 2]));
        assert_eq!(s.span(), 4);
        assert!(s.fits(4));
        assert!(!s.fits(3));
        assert_eq!(Subset::full(32).len(), 32);
    }
}
