//! Partition of the semigroups with a fixed Frobenius number into classes
//! `(Y, Z)`, and the closed-form counts of the depth-3 classes.
//!
//! With `fbar = floor((f - 1) / 2)`:
//!
//! * `Y(S) = { t : fbar - t ∈ S, 0 <= t < fbar }`, empty exactly for depth 1 and 2;
//! * `Z(S) = { x - f + fbar : x ∈ S, f/2 < x <= f - m }`;
//! * `W1 = (Y - Z - 1) ∩ [0, ∞)`, `W2 = (Y - Z - 2) ∩ [-1, ∞)`;
//! * `alpha = |2Y ∪ W1|`, `alpha' = |2Y ∪ W2|`, `beta = Max(Y) + 1 - |Y ∪ Z|`.
//!
//! For `f > 6 Max(Y) + 6` a class holds `2^(fbar - Max(Y) - 1 - alpha)`
//! semigroups (`alpha'` for even `f`).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::enumerate::{fold_by_frobenius, frobenius_census, EnumConfig};
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::smallset::SmallSet;
use crate::util::{binomial, fbar, pow2};

/// Parity of the Frobenius number, which selects `alpha` or `alpha'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(f: u32) -> Parity {
        if f % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A `(Y, Z)` pair with `Y` nonempty, `Z ⊆ [0, Max(Y)] \ Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct YZ {
    pub y: SmallSet,
    pub z: SmallSet,
}

impl YZ {
    /// Largest `Max(Y)` accepted; keeps `2Y` inside a [`SmallSet`].
    pub const MAX_L: u32 = 31;

    pub fn new(y: SmallSet, z: SmallSet) -> Result<YZ> {
        let l = y
            .max()
            .ok_or_else(|| Error::InvalidPair("Y must be nonempty".into()))?;
        if l > Self::MAX_L {
            return Err(Error::InvalidPair(format!(
                "Max(Y) = {l} exceeds {}",
                Self::MAX_L
            )));
        }
        if z.max().is_some_and(|zm| zm > l) {
            return Err(Error::InvalidPair(format!("Z = {z:?} not inside [0, {l}]")));
        }
        if !y.is_disjoint(z) {
            return Err(Error::InvalidPair(format!(
                "Y = {y:?} and Z = {z:?} intersect"
            )));
        }
        Ok(YZ { y, z })
    }

    pub fn max_y(&self) -> u32 {
        self.y.max().expect("Y is nonempty")
    }

    /// `W1` as a set of non-negative integers.
    fn w1_mask(&self) -> u64 {
        self.z
            .iter()
            .fold(0, |acc, z| acc | self.y.mask() >> (z + 1))
    }

    pub fn alpha(&self) -> u32 {
        (self.y.sumset().mask() | self.w1_mask()).count_ones()
    }

    /// `W2 = W1 - 1`, so `-1 ∈ W2` exactly when `0 ∈ W1`; `2Y` never holds `-1`.
    pub fn alpha_prime(&self) -> u32 {
        let w1 = self.w1_mask();
        (self.y.sumset().mask() | w1 >> 1).count_ones() + (w1 & 1) as u32
    }

    pub fn alpha_for(&self, parity: Parity) -> u32 {
        match parity {
            Parity::Odd => self.alpha(),
            Parity::Even => self.alpha_prime(),
        }
    }

    pub fn beta(&self) -> u32 {
        self.max_y() + 1 - self.y.union(self.z).len()
    }

    pub fn signature(&self) -> YZSignature {
        let w1 = SmallSet::from_mask(self.w1_mask());
        YZSignature {
            y: self.y,
            z: self.z,
            two_y: self.y.sumset(),
            w1,
            w2: w1.iter().map(|w| w as i32 - 1).collect(),
            alpha: self.alpha(),
            alpha_prime: self.alpha_prime(),
            beta: self.beta(),
        }
    }

    fn order_key(&self) -> (u32, u64, u64) {
        (self.max_y(), self.y.mask(), self.z.mask())
    }
}

/// Listing order: by `Max(Y)`, then `Y`, then `Z`, each set compared by mask.
impl Ord for YZ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for YZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A `(Y, Z)` pair together with its derived sets and parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YZSignature {
    pub y: SmallSet,
    pub z: SmallSet,
    pub two_y: SmallSet,
    pub w1: SmallSet,
    pub w2: Vec<i32>,
    pub alpha: u32,
    pub alpha_prime: u32,
    pub beta: u32,
}

/// The class of a semigroup; `Empty` covers depths 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassKey {
    Empty,
    Deep(YZ),
}

pub fn derive_params(y: SmallSet, z: SmallSet) -> Result<YZSignature> {
    Ok(YZ::new(y, z)?.signature())
}

/// Class of `s`. Panics if `fbar(f)` exceeds 64.
pub fn signature_of(s: &Semigroup) -> ClassKey {
    let f = s.frobenius();
    assert!(f >= 1, "signature needs a Frobenius number >= 1");
    let f = f as u32;
    let fb = fbar(f);
    assert!(
        fb <= SmallSet::CAPACITY,
        "Frobenius number {f} too large for a class key"
    );
    let y: SmallSet = (1..=fb)
        .filter(|&x| s.contains(x as u64))
        .map(|x| fb - x)
        .collect();
    if y.is_empty() {
        return ClassKey::Empty;
    }
    let m = s.multiplicity();
    let z: SmallSet = (f / 2 + 1..=f - m)
        .filter(|&x| s.contains(x as u64))
        .map(|x| x + fb - f)
        .collect();
    ClassKey::Deep(YZ { y, z })
}

fn check_threshold(key: &YZ, f: u32) -> Result<()> {
    let l = key.max_y();
    if f <= 6 * l + 6 {
        return Err(Error::FTooSmall { f, max_y: l });
    }
    Ok(())
}

/// Exponent `fbar - Max(Y) - 1 - alpha` (or `alpha'`).
fn free_count(key: &YZ, f: u32) -> u32 {
    fbar(f) - key.max_y() - 1 - key.alpha_for(Parity::of(f))
}

/// `N(Y, Z, f)` from the closed form.
pub fn class_count(key: &YZ, f: u32) -> Result<BigUint> {
    check_threshold(key, f)?;
    Ok(pow2(free_count(key, f)))
}

/// `N(Y, Z, f, n)` from the closed form; zero outside the binomial's range.
pub fn class_count_by_n(key: &YZ, f: u32, n: u32) -> Result<BigUint> {
    check_threshold(key, f)?;
    let top = free_count(key, f) as i64;
    let alpha = key.alpha_for(Parity::of(f)) as i64;
    let lower = n as i64 - key.max_y() as i64 - 1 - alpha + key.beta() as i64;
    Ok(binomial(top, lower))
}

/// The parts of an explicit class construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLayout {
    /// `{0} ∪ (fbar - Y) ∪ (Z + f - fbar) ∪ forced`, restricted to `[1, f - 1]`.
    pub base: Vec<u32>,
    /// `(f - 1) - (2Y ∪ W1)` for odd `f`, `(f - 2) - (2Y ∪ W2)` for even `f`.
    pub forced: Vec<u32>,
    /// Positions of `[f - fbar + Max(Y) + 1, f - 1]` not forced; each is free.
    pub free: Vec<u32>,
}

pub fn class_layout(key: &YZ, f: u32) -> Result<ClassLayout> {
    check_threshold(key, f)?;
    let fb = fbar(f);
    let l = key.max_y();
    let sig = key.signature();
    let shift: i64 = match Parity::of(f) {
        Parity::Odd => f as i64 - 1,
        Parity::Even => f as i64 - 2,
    };
    let offsets: Vec<i64> = match Parity::of(f) {
        Parity::Odd => sig.two_y.union(sig.w1).iter().map(i64::from).collect(),
        Parity::Even => sig
            .two_y
            .iter()
            .map(i64::from)
            .chain(sig.w2.iter().map(|&w| w as i64))
            .collect(),
    };
    let mut forced: Vec<u32> = offsets.iter().map(|o| (shift - o) as u32).collect();
    forced.sort_unstable();
    forced.dedup();

    let free_lo = f - fb + l + 1;
    let z_lo = f - fb;
    for &x in &forced {
        // Forced elements sit in the free interval, clear of the Z region.
        if x < free_lo || x >= f || (z_lo..=z_lo + l).contains(&x) {
            return Err(Error::InvalidPair(format!(
                "forced element {x} outside [{free_lo}, {}] for f = {f}",
                f - 1
            )));
        }
    }
    let mut base: Vec<u32> = key
        .y
        .iter()
        .map(|y| fb - y)
        .chain(key.z.iter().map(|z| z + f - fb))
        .chain(forced.iter().copied())
        .collect();
    base.sort_unstable();
    let free = (free_lo..f)
        .filter(|x| forced.binary_search(x).is_err())
        .collect();
    Ok(ClassLayout { base, forced, free })
}

/// Builds every member of class `(Y, Z)` at Frobenius number `f` and hands
/// it to `visitor`. Each set is validated by [`Semigroup::build`] and must
/// have exactly the requested signature. Returns the member count.
pub fn class_members<V>(key: &YZ, f: u32, mut visitor: V) -> Result<u64>
where
    V: FnMut(&Semigroup),
{
    const MAX_FREE: usize = 30;
    let layout = class_layout(key, f)?;
    if layout.free.len() > MAX_FREE {
        return Err(Error::OutOfBudget {
            what: "free positions in class",
            value: layout.free.len() as u64,
            max: MAX_FREE as u64,
        });
    }
    let mut count = 0;
    for subset in 0u64..1 << layout.free.len() {
        let chosen = layout
            .free
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .map(|(_, &x)| x);
        let s = Semigroup::build(f, layout.base.iter().copied().chain(chosen))?;
        let got = signature_of(&s);
        if got != ClassKey::Deep(*key) {
            return Err(Error::InvalidPair(format!(
                "constructed {s} has class {got:?}, expected {key:?}"
            )));
        }
        visitor(&s);
        count += 1;
    }
    Ok(count)
}

/// Every `(Y, Z)` with `Max(Y) <= max_l`, in [`YZ`] order.
pub fn enumerate_class_keys(max_l: u32) -> Result<Vec<YZ>> {
    const MAX_LISTED_L: u32 = 16;
    if max_l > MAX_LISTED_L {
        return Err(Error::OutOfBudget {
            what: "class key bound L",
            value: max_l as u64,
            max: MAX_LISTED_L as u64,
        });
    }
    let mut keys = Vec::new();
    for l in 0..=max_l {
        let below = (1u64 << l) - 1;
        for low in 0..=below {
            let y = SmallSet::from_mask(low | 1 << l);
            let room = below & !low;
            // Ascending submasks of `room`.
            let mut z = 0u64;
            loop {
                keys.push(YZ {
                    y,
                    z: SmallSet::from_mask(z),
                });
                if z == room {
                    break;
                }
                z = (z.wrapping_sub(room)) & room;
            }
        }
    }
    Ok(keys)
}

/// `1 + Σ_{Max(Y) <= L} 2^(-Max(Y) - 1 - alpha)` (`alpha'` for even), exactly.
pub fn constant_partial_sum(max_l: u32, parity: Parity) -> Result<BigRational> {
    let keys = enumerate_class_keys(max_l)?;
    let exps: Vec<u32> = keys
        .iter()
        .map(|k| k.max_y() + 1 + k.alpha_for(parity))
        .collect();
    let top = exps.iter().copied().max().unwrap_or(0);
    let mut numerator: u128 = 1 << top;
    for e in exps {
        numerator += 1 << (top - e);
    }
    Ok(BigRational::new(
        BigUint::from(numerator).into(),
        pow2(top).into(),
    ))
}

/// Count and per-`n` breakdown of one class in an enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassTally {
    pub total: u64,
    pub by_n: BTreeMap<u32, u64>,
}

/// Groups all semigroups with Frobenius number `f` by class.
pub fn class_partition(f: u32, cfg: &EnumConfig) -> Result<BTreeMap<ClassKey, ClassTally>> {
    fold_by_frobenius(
        f,
        cfg,
        BTreeMap::new,
        |acc: &mut BTreeMap<ClassKey, ClassTally>, s| {
            let t = acc.entry(signature_of(s)).or_default();
            t.total += 1;
            *t.by_n.entry(s.small_members().count() as u32).or_default() += 1;
        },
        |acc, part| {
            for (k, t) in part {
                let e = acc.entry(k).or_default();
                e.total += t.total;
                for (n, c) in t.by_n {
                    *e.by_n.entry(n).or_default() += c;
                }
            }
        },
    )
}

/// Members of one class found by filtering the full enumeration, sorted by mask.
pub fn filtered_class(f: u32, key: ClassKey, cfg: &EnumConfig) -> Result<Vec<Semigroup>> {
    let mut found = fold_by_frobenius(
        f,
        cfg,
        Vec::new,
        |acc: &mut Vec<Semigroup>, s| {
            if signature_of(s) == key {
                acc.push(s.clone());
            }
        },
        |acc, part| acc.extend(part),
    )?;
    found.sort_by_key(|s| s.to_mask());
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneRow {
    pub f: u32,
    pub n_f: u64,
    pub n_f_plus_2: u64,
    pub holds: bool,
}

/// `N(f) < N(f + 2)` for `1 <= f <= f_max`.
pub fn verify_monotonicity(f_max: u32, cfg: &EnumConfig) -> Result<Vec<MonotoneRow>> {
    let totals = (1..=f_max + 2)
        .map(|f| Ok(frobenius_census(f, cfg)?.total))
        .collect::<Result<Vec<u64>>>()?;
    Ok((1..=f_max)
        .map(|f| {
            let (a, b) = (totals[f as usize - 1], totals[f as usize + 1]);
            MonotoneRow {
                f,
                n_f: a,
                n_f_plus_2: b,
                holds: a < b,
            }
        })
        .collect())
}

/// `2^fbar <= N(f) < 4 * 2^fbar`.
pub fn backelin_sandwich_holds(f: u32, n_f: u64) -> bool {
    let base = 1u128 << fbar(f);
    base <= n_f as u128 && (n_f as u128) < 4 * base
}

/// `N_mul(m, f) <= (1/4) 2^fbar (11/12)^(fbar - m)` for `m < f/2`, checked
/// exactly as `4 * 12^d * N_mul <= 2^fbar * 11^d`.
pub fn multiplicity_tail_bound_holds(m: u32, f: u32, n_mul: u64) -> bool {
    debug_assert!(2 * m < f);
    let d = fbar(f) - m;
    let lhs = BigUint::from(4u32) * BigUint::from(12u32).pow(d) * BigUint::from(n_mul);
    let rhs = pow2(fbar(f)) * BigUint::from(11u32).pow(d);
    lhs <= rhs
}

/// True when `value > threshold`, with `threshold` a decimal like `1.08`.
pub fn exceeds(value: &BigRational, numer: i64, denom: i64) -> bool {
    *value > BigRational::new(numer.into(), denom.into())
}

/// `value - 1`, the partial sum without its leading 1.
pub fn without_leading_one(value: &BigRational) -> BigRational {
    value - BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn yz(y: &[u32], z: &[u32]) -> YZ {
        YZ::new(y.iter().copied().collect(), z.iter().copied().collect()).unwrap()
    }

    fn sg(f: u32, xs: &[u32]) -> Semigroup {
        Semigroup::build(f, xs.iter().copied()).unwrap()
    }

    #[test]
    fn derive_params_examples() {
        let s = derive_params(SmallSet::from([2]), SmallSet::from([0])).unwrap();
        assert_eq!(s.two_y.to_vec(), vec![4]);
        assert_eq!(s.w1.to_vec(), vec![1]);
        assert_eq!(s.w2, vec![0]);
        assert_eq!((s.alpha, s.alpha_prime, s.beta), (2, 2, 1));

        let s = derive_params(SmallSet::from([0]), SmallSet::empty()).unwrap();
        assert_eq!(s.two_y.to_vec(), vec![0]);
        assert!(s.w1.is_empty() && s.w2.is_empty());
        assert_eq!((s.alpha, s.alpha_prime, s.beta), (1, 1, 0));

        let s = derive_params(SmallSet::from([1]), SmallSet::from([0])).unwrap();
        assert_eq!(s.two_y.to_vec(), vec![2]);
        assert_eq!(s.w1.to_vec(), vec![0]);
        assert_eq!(s.w2, vec![-1]);
        assert_eq!((s.alpha, s.alpha_prime, s.beta), (2, 2, 0));
    }

    #[test]
    fn derive_params_rejects_bad_pairs() {
        let bad = [
            (SmallSet::empty(), SmallSet::empty()),
            (SmallSet::from([1]), SmallSet::from([1])),
            (SmallSet::from([1]), SmallSet::from([2])),
            (SmallSet::from([40]), SmallSet::empty()),
        ];
        for (y, z) in bad {
            assert!(matches!(derive_params(y, z), Err(Error::InvalidPair(_))));
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(
            signature_of(&sg(30, &[12, 16, 24, 28])),
            ClassKey::Deep(yz(&[2], &[0]))
        );
        assert_eq!(
            signature_of(&sg(7, &[3, 5, 6])),
            ClassKey::Deep(yz(&[0], &[]))
        );
        assert_eq!(signature_of(&sg(7, &[4, 5, 6])), ClassKey::Empty);
        assert_eq!(signature_of(&sg(7, &[])), ClassKey::Empty);
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(
            class_count(&yz(&[2], &[0]), 30).unwrap(),
            BigUint::from(512u32)
        );
        assert_eq!(class_count(&yz(&[0], &[]), 7).unwrap(), BigUint::from(2u32));
        assert_eq!(
            class_count(&yz(&[2], &[0]), 31).unwrap(),
            BigUint::from(1024u32)
        );
        assert_eq!(
            class_count(&yz(&[2], &[0]), 18),
            Err(Error::FTooSmall { f: 18, max_y: 2 })
        );
        assert_eq!(
            class_count(&yz(&[0], &[]), 6),
            Err(Error::FTooSmall { f: 6, max_y: 0 })
        );
    }

    #[test]
    fn class_count_by_n_examples() {
        let k = yz(&[0], &[]);
        assert_eq!(class_count_by_n(&k, 7, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(class_count_by_n(&k, 7, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(class_count_by_n(&k, 7, 1).unwrap(), BigUint::from(0u32));
        let k = yz(&[2], &[0]);
        assert!(class_count_by_n(&k, 30, 0).unwrap().is_zero());
        assert!(class_count_by_n(&k, 30, 14).unwrap().is_zero());
        let total: BigUint = (0..=14).map(|n| class_count_by_n(&k, 30, n).unwrap()).sum();
        assert_eq!(total, BigUint::from(512u32));
    }

    #[test]
    fn layout_of_worked_example() {
        let layout = class_layout(&yz(&[2], &[0]), 30).unwrap();
        assert_eq!(layout.forced, vec![24, 28]);
        assert_eq!(layout.base, vec![12, 16, 24, 28]);
        let expect: Vec<u32> = (19..=29).filter(|x| *x != 24 && *x != 28).collect();
        assert_eq!(layout.free, expect);
    }

    #[test]
    fn class_members_examples() {
        let mut seen = Vec::new();
        let n = class_members(&yz(&[0], &[]), 7, |s| seen.push(s.clone())).unwrap();
        assert_eq!(n, 2);
        seen.sort_by_key(|s| s.to_mask());
        assert_eq!(seen, vec![sg(7, &[3, 6]), sg(7, &[3, 5, 6])]);

        assert_eq!(class_members(&yz(&[1], &[0]), 13, |_| {}).unwrap(), 4);
        assert_eq!(class_members(&yz(&[2], &[0]), 30, |_| {}).unwrap(), 512);
    }

    #[test]
    fn class_keys_listing() {
        assert_eq!(enumerate_class_keys(0).unwrap(), vec![yz(&[0], &[])]);
        assert_eq!(
            enumerate_class_keys(1).unwrap(),
            vec![
                yz(&[0], &[]),
                yz(&[1], &[]),
                yz(&[1], &[0]),
                yz(&[0, 1], &[])
            ]
        );
        let keys = enumerate_class_keys(2).unwrap();
        assert_eq!(keys.len(), 13);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        // Each position below Max(Y) is in Y, in Z, or in neither.
        assert_eq!(
            enumerate_class_keys(6).unwrap().len(),
            (0..=6).map(|l| 3usize.pow(l)).sum()
        );
    }

    #[test]
    fn partial_sum_base_case() {
        let c = constant_partial_sum(0, Parity::Odd).unwrap();
        assert_eq!(c, BigRational::new(5.into(), 4.into()));
    }

    #[test]
    fn multiplicity_bound_edge() {
        // N_mul(3, 7) = 2 equals the bound (1/4) 2^3 exactly.
        assert!(multiplicity_tail_bound_holds(3, 7, 2));
        assert!(!multiplicity_tail_bound_holds(3, 7, 3));
    }
}
