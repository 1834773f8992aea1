//! Numerical semigroups and their scalar invariants.
//!
//! A [`Semigroup`] stores its Frobenius number `f` and a membership bit
//! vector over `[0, f + 1]`; everything above `f + 1` is implicitly a member.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: u32 = 64;

fn words_for(bits: u32) -> usize {
    bits.div_ceil(WORD) as usize
}

fn get_bit(words: &[u64], i: u32) -> bool {
    words
        .get((i / WORD) as usize)
        .is_some_and(|w| w >> (i % WORD) & 1 == 1)
}

fn set_bit(words: &mut [u64], i: u32) {
    words[(i / WORD) as usize] |= 1 << (i % WORD);
}

/// Word `w` of `src << shift`, with `src` treated as zero outside its storage.
fn shifted_word(src: &[u64], shift: u32, w: usize) -> u64 {
    let q = (shift / WORD) as usize;
    let r = shift % WORD;
    if w < q {
        return 0;
    }
    let lo = src.get(w - q).copied().unwrap_or(0) << r;
    let carry = if r > 0 && w > q {
        src.get(w - q - 1).copied().unwrap_or(0) >> (WORD - r)
    } else {
        0
    };
    lo | carry
}

/// Mask of the bits of word `w` that fall inside `[1, top]`.
fn window_mask(w: usize, top: u32) -> u64 {
    let base = w as u32 * WORD;
    if base > top {
        return 0;
    }
    let hi = if top - base >= WORD - 1 {
        u64::MAX
    } else {
        (1u64 << (top - base + 1)) - 1
    };
    if w == 0 {
        hi & !1
    } else {
        hi
    }
}

/// Looks for `a + b <= top` with `a, b` members and `a + b` a non-member.
/// Bits above `top` count as members, so `words` only needs to cover `[0, top]`.
fn closure_violation(words: &[u64], top: u32) -> Option<(u32, u32)> {
    let nwords = words_for(top + 1);
    for a in 1..=top / 2 {
        if !get_bit(words, a) {
            continue;
        }
        for w in 0..nwords {
            let bad = shifted_word(words, a, w)
                & !words.get(w).copied().unwrap_or(0)
                & window_mask(w, top);
            if bad != 0 {
                let sum = w as u32 * WORD + bad.trailing_zeros();
                return Some((a, sum - a));
            }
        }
    }
    None
}

/// A validated numerical semigroup.
///
/// `frobenius == -1` encodes the naturals (genus 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Semigroup {
    frobenius: i32,
    words: Vec<u64>,
}

/// Scalar invariants of one semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantProfile {
    /// Frobenius number.
    pub f: i32,
    /// Genus, the number of gaps.
    pub g: u32,
    /// Multiplicity.
    pub m: u32,
    /// Depth `ceil((f + 1) / m)`; the naturals are given depth 1.
    pub q: u32,
    /// `|S ∩ [1, f]|`.
    pub n: u32,
    /// Embedding dimension.
    pub e: u32,
    pub med: bool,
}

impl Semigroup {
    /// Builds `{0} ∪ members ∪ {f + 1 →}` and checks closure.
    pub fn build<I>(f: u32, members: I) -> Result<Semigroup>
    where
        I: IntoIterator<Item = u32>,
    {
        if f == 0 {
            return Err(Error::InvalidArgument(
                "Frobenius number must be at least 1".into(),
            ));
        }
        if f > i32::MAX as u32 - 2 {
            return Err(Error::InvalidArgument(format!(
                "Frobenius number {f} too large"
            )));
        }
        let mut words = vec![0u64; words_for(f + 2)];
        set_bit(&mut words, 0);
        set_bit(&mut words, f + 1);
        for x in members {
            if x == f {
                return Err(Error::FrobeniusViolated { f });
            }
            if x == 0 || x > f + 1 {
                return Err(Error::InvalidArgument(format!(
                    "member {x} outside [1, {}]",
                    f + 1
                )));
            }
            set_bit(&mut words, x);
        }
        if let Some((a, b)) = closure_violation(&words, f) {
            return Err(Error::NotClosed { a, b, sum: a + b });
        }
        Ok(Semigroup {
            frobenius: f as i32,
            words,
        })
    }

    /// The semigroup of all naturals.
    pub fn naturals() -> Semigroup {
        Semigroup {
            frobenius: -1,
            words: vec![1],
        }
    }

    /// `{0, f + 1 →}`, the unique depth-1 semigroup with Frobenius number `f`.
    pub fn ordinary(f: u32) -> Result<Semigroup> {
        Semigroup::build(f, [])
    }

    /// Wraps a membership mask produced by one of the enumerators.
    /// Bits `0` and `f + 1` are forced on; closure is only debug-checked.
    pub(crate) fn from_mask(f: u32, mask: u128) -> Semigroup {
        debug_assert!(f <= 126);
        let keep = if f + 2 >= 128 {
            u128::MAX
        } else {
            (1u128 << (f + 2)) - 1
        };
        let mask = (mask & keep) | 1 | (1u128 << (f + 1));
        debug_assert_eq!(mask >> f & 1, 0);
        let mut words = vec![mask as u64, (mask >> 64) as u64];
        words.truncate(words_for(f + 2));
        debug_assert!(closure_violation(&words, f).is_none());
        Semigroup {
            frobenius: f as i32,
            words,
        }
    }

    pub fn frobenius(&self) -> i32 {
        self.frobenius
    }

    pub fn contains(&self, x: u64) -> bool {
        x as i64 > self.frobenius as i64 || get_bit(&self.words, x as u32)
    }

    /// Members in `[1, f]`, ascending.
    pub fn small_members(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.frobenius.max(0) as u32).filter(|&x| get_bit(&self.words, x))
    }

    /// Gaps in ascending order.
    pub fn gaps(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.frobenius.max(0) as u32).filter(|&x| !get_bit(&self.words, x))
    }

    pub fn multiplicity(&self) -> u32 {
        (1..)
            .find(|&x| self.contains(x as u64))
            .expect("members above f always exist")
    }

    pub fn genus(&self) -> u32 {
        self.gaps().count() as u32
    }

    /// Membership of `[0, 127]` as a mask, if the whole interesting range fits.
    pub fn to_mask(&self) -> Option<u128> {
        if self.frobenius > 126 {
            return None;
        }
        let mut mask = 0u128;
        for (i, w) in self.words.iter().enumerate() {
            mask |= (*w as u128) << (64 * i);
        }
        let above = self.frobenius + 1;
        if above < 128 {
            mask |= u128::MAX << above;
        }
        Some(mask)
    }

    /// Minimal generating set, ascending.
    pub fn min_generators(&self) -> Vec<u32> {
        if self.frobenius < 0 {
            return vec![1];
        }
        let f = self.frobenius as u32;
        let m = self.multiplicity();
        let top = f + m;
        let mut members = vec![0u64; words_for(top + 1)];
        for x in 0..=top {
            if self.contains(x as u64) {
                set_bit(&mut members, x);
            }
        }
        let mut nonzero = members.clone();
        nonzero[0] &= !1;
        let mut sums = vec![0u64; members.len()];
        for a in m..=top / 2 {
            if get_bit(&nonzero, a) {
                for (w, s) in sums.iter_mut().enumerate() {
                    *s |= shifted_word(&nonzero, a, w);
                }
            }
        }
        (m..=top)
            .filter(|&x| get_bit(&nonzero, x) && !get_bit(&sums, x))
            .collect()
    }

    /// Max embedding dimension, decided by checking that
    /// `(S \ {0}) - m` is closed under addition.
    pub fn is_med(&self) -> bool {
        if self.frobenius < 0 {
            return true;
        }
        let f = self.frobenius as u32;
        let m = self.multiplicity();
        if m > f {
            return true;
        }
        let top = f - m;
        let mut shifted = vec![0u64; words_for(top + 1)];
        for x in m..=f {
            if get_bit(&self.words, x) {
                set_bit(&mut shifted, x - m);
            }
        }
        closure_violation(&shifted, top).is_none()
    }

    pub fn profile(&self) -> InvariantProfile {
        let f = self.frobenius;
        let n = self.small_members().count() as u32;
        let g = (f + 1) as u32 - n - u32::from(f >= 0);
        let m = self.multiplicity();
        let q = if f < 0 { 1 } else { (f as u32 + 1).div_ceil(m) };
        let e = self.min_generators().len() as u32;
        InvariantProfile {
            f,
            g,
            m,
            q,
            n,
            e,
            med: e == m,
        }
    }
}

impl fmt::Display for Semigroup {
    /// `{0, 3, 5, 6, 8→}` style.
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.write_str("{0")?;
        for x in self.small_members() {
            write!(fm, ", {x}")?;
        }
        write!(fm, ", {}→}}", self.frobenius + 1)
    }
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semigroup{self}")
    }
}

/// Serialized as `{"frobenius": f, "members": [...]}` with members in `[1, f]`.
impl Serialize for Semigroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Semigroup", 2)?;
        st.serialize_field("frobenius", &self.frobenius)?;
        st.serialize_field("members", &self.small_members().collect::<Vec<_>>())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(f: u32, xs: &[u32]) -> Semigroup {
        Semigroup::build(f, xs.iter().copied()).unwrap()
    }

    #[test]
    fn build_examples() {
        let s = sg(1, &[]);
        assert_eq!(s.frobenius(), 1);
        assert!(!s.contains(1) && s.contains(2) && s.contains(0));

        assert!(Semigroup::build(30, [12, 16, 24, 28]).is_ok());

        assert_eq!(
            Semigroup::build(7, [3, 4]),
            Err(Error::NotClosed { a: 3, b: 3, sum: 6 })
        );
        assert_eq!(
            Semigroup::build(7, [3, 7]),
            Err(Error::FrobeniusViolated { f: 7 })
        );
        assert!(matches!(
            Semigroup::build(0, []),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Semigroup::build(5, [9]),
            Err(Error::InvalidArgument(_))
        ));
        // 3 + 3 = 6 must be present.
        assert_eq!(
            Semigroup::build(7, [3]),
            Err(Error::NotClosed { a: 3, b: 3, sum: 6 })
        );
    }

    #[test]
    fn closure_across_word_boundary() {
        // 40 + 40 = 80 <= f = 100 must be present.
        let err = Semigroup::build(100, [40]).unwrap_err();
        assert_eq!(
            err,
            Error::NotClosed {
                a: 40,
                b: 40,
                sum: 80
            }
        );
        let members: Vec<u32> = (51..100).collect();
        let s = Semigroup::build(100, members).unwrap();
        assert_eq!(s.multiplicity(), 51);
        assert_eq!(s.profile().q, 2);
    }

    #[test]
    fn profile_examples() {
        let p = sg(9, &[]).profile();
        assert_eq!((p.q, p.g, p.n, p.m), (1, 9, 0, 10));

        let p = sg(30, &[12, 16, 24, 28]).profile();
        assert_eq!((p.f, p.m, p.q, p.n, p.g), (30, 12, 3, 4, 26));

        let p = sg(2, &[]).profile();
        assert_eq!((p.f, p.m, p.q, p.g, p.n), (2, 3, 1, 2, 0));

        let p = Semigroup::naturals().profile();
        assert_eq!((p.f, p.g, p.m, p.n, p.e, p.q), (-1, 0, 1, 0, 1, 1));
        assert!(p.med);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(sg(1, &[]).min_generators(), vec![2, 3]);
        assert_eq!(sg(2, &[]).min_generators(), vec![3, 4, 5]);
        assert_eq!(sg(7, &[4, 5, 6]).min_generators(), vec![4, 5, 6]);
        assert_eq!(Semigroup::naturals().min_generators(), vec![1]);
        // <3, 5> has Frobenius 7.
        assert_eq!(sg(7, &[3, 5, 6]).min_generators(), vec![3, 5]);
    }

    #[test]
    fn med_examples() {
        assert!(sg(2, &[]).is_med());
        assert!(sg(1, &[]).is_med());
        assert!(!sg(7, &[4, 5, 6]).is_med());
        assert_eq!(sg(7, &[4, 5, 6]).profile().e, 3);
    }

    #[test]
    fn mask_round_trip() {
        let s = sg(30, &[12, 16, 24, 28]);
        let mask = s.to_mask().unwrap();
        assert_eq!(Semigroup::from_mask(30, mask), s);
        assert_eq!(s.to_string(), "{0, 12, 16, 24, 28, 31→}");
    }
}
