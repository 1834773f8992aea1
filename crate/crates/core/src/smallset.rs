use std::fmt;

use serde::{Serialize, Serializer};

/// A set of small non-negative integers (each below 64) stored as a bitmask.
///
/// Ordering is by the raw mask, which is what gives class keys their
/// deterministic listing order.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmallSet(u64);

impl SmallSet {
    pub const CAPACITY: u32 = 64;

    pub const fn empty() -> Self {
        SmallSet(0)
    }

    pub const fn from_mask(mask: u64) -> Self {
        SmallSet(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    /// Panics if `x >= 64`.
    pub fn insert(&mut self, x: u32) {
        assert!(x < Self::CAPACITY, "SmallSet element {x} out of range");
        self.0 |= 1 << x;
    }

    pub fn contains(self, x: u32) -> bool {
        x < Self::CAPACITY && self.0 >> x & 1 == 1
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn union(self, other: Self) -> Self {
        SmallSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SmallSet(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// `{a + b : a, b in self}`. Panics if a sum would not fit.
    pub fn sumset(self) -> Self {
        if let Some(top) = self.max() {
            assert!(2 * top < Self::CAPACITY, "sumset overflows SmallSet");
        }
        let mut out = 0;
        for a in self.iter() {
            out |= self.0 << a;
        }
        SmallSet(out)
    }

    pub fn iter(self) -> impl Iterator<Item = u32> + Clone {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            Some(x)
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl FromIterator<u32> for SmallSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut s = SmallSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<const N: usize> From<[u32; N]> for SmallSet {
    fn from(xs: [u32; N]) -> Self {
        xs.into_iter().collect()
    }
}

/// Space-separated elements, e.g. `0 2`; the empty set renders as an empty string.
impl fmt::Display for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for SmallSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
