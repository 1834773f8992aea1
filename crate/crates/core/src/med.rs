//! Max embedding dimension (MED) semigroups by Frobenius number.
//!
//! Counting uses the `e = m` test on each enumerated semigroup. The
//! independent route uses the shift criterion: MED semigroups with
//! Frobenius number `f` and multiplicity `m` correspond to semigroups with
//! Frobenius number `f - m` that contain `m`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::enumerate::frobenius::{search, Constraints, LeafSink};
use crate::enumerate::{count_containing, EnumConfig};
use crate::error::Result;
use crate::util::pow2;

/// `MED(f)` for `f = 1..=30`, as tabulated in the literature.
pub const MED_REFERENCE: [u64; 30] = [
    1, 1, 2, 2, 4, 3, 7, 7, 11, 11, 22, 17, 35, 37, 52, 59, 103, 91, 168, 168, 241, 298, 477, 418,
    715, 872, 1135, 1288, 2105, 1949,
];

/// Exponent in the upper bound `MED(f) < c' 2^(0.41385 f)`.
pub const UPPER_EXPONENT: f64 = 0.41385;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MedCount {
    pub f: u32,
    pub total: u64,
    pub by_multiplicity: BTreeMap<u32, u64>,
}

/// Embedding dimension and multiplicity of a search leaf.
fn leaf_e_and_m(f: u32, members: u128) -> (u32, u32) {
    let nonzero_small = members & !1;
    let m = if nonzero_small == 0 {
        f + 1
    } else {
        nonzero_small.trailing_zeros()
    };
    let top = f + m;
    let window = if top >= 127 {
        u128::MAX
    } else {
        (1u128 << (top + 1)) - 1
    };
    let nonzero = (nonzero_small | (u128::MAX << (f + 1))) & window;
    let mut sums = 0u128;
    let mut rest = nonzero & ((1u128 << (top / 2 + 1)) - 1);
    while rest != 0 {
        let a = rest.trailing_zeros();
        rest &= rest - 1;
        sums |= nonzero << a;
    }
    ((nonzero & !sums).count_ones(), m)
}

impl LeafSink for MedCount {
    fn leaf(&mut self, f: u32, members: u128) {
        let (e, m) = leaf_e_and_m(f, members);
        if e == m {
            self.total += 1;
            *self.by_multiplicity.entry(m).or_default() += 1;
        }
    }

    fn absorb(&mut self, other: Self) {
        self.total += other.total;
        for (m, c) in other.by_multiplicity {
            *self.by_multiplicity.entry(m).or_default() += c;
        }
    }
}

/// `MED(f)` with its split by multiplicity.
pub fn count_med(f: u32, cfg: &EnumConfig) -> Result<MedCount> {
    search(f, Constraints::none(), cfg, || MedCount {
        f,
        ..Default::default()
    })
}

/// Semigroups with Frobenius number `f - m` containing `m`; for `m = f + 1`
/// this is the naturals, counted once.
pub fn count_med_by_shift(m: u32, f: u32, cfg: &EnumConfig) -> Result<u64> {
    if m < 2 || m > f + 1 || m == f {
        return Ok(0);
    }
    if m == f + 1 {
        return Ok(1);
    }
    count_containing(f - m, m, cfg)
}

/// `Σ_m count_med_by_shift(m, f)`.
pub fn med_by_shift(f: u32, cfg: &EnumConfig) -> Result<u64> {
    (2..=f + 1).map(|m| count_med_by_shift(m, f, cfg)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MedBounds {
    pub f: u32,
    pub med: u64,
    /// `2^(-8/3) 2^(f/3) < MED(f)`, decided exactly as `2^(f - 8) < MED^3`.
    pub lower_ok: bool,
    /// `MED(f) / 2^(0.41385 f)`.
    pub upper_ratio: f64,
}

pub fn med_bounds_check(f: u32, med: u64) -> MedBounds {
    let cube = BigUint::from(med).pow(3);
    let lower_ok = if f >= 8 {
        pow2(f - 8) < cube
    } else {
        cube * pow2(8 - f) > BigUint::one()
    };
    MedBounds {
        f,
        med,
        lower_ok,
        upper_ratio: med as f64 / (UPPER_EXPONENT * f as f64).exp2(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub f: u32,
    pub med: u64,
    pub log2_med_over_f: f64,
}

pub fn med_growth_table(f_max: u32, cfg: &EnumConfig) -> Result<Vec<GrowthRow>> {
    (1..=f_max)
        .map(|f| {
            let med = count_med(f, cfg)?.total;
            Ok(growth_row(f, med))
        })
        .collect()
}

pub fn growth_row(f: u32, med: u64) -> GrowthRow {
    GrowthRow {
        f,
        med,
        log2_med_over_f: (med as f64).log2() / f as f64,
    }
}

/// A closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    fn scale(&self, k: &BigRational) -> Interval {
        if k.is_negative() {
            Interval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Interval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Rigorous enclosure of `ln(x)` for rational `x > 0`, from
/// `ln x = 2 Σ t^(2k+1) / (2k+1)` with `t = (x - 1)/(x + 1)`. The tail after
/// `terms` terms is bounded by `2|t|^(2K+1) / ((2K+1)(1 - t²))`.
pub fn ln_enclosure(x: &BigRational, terms: u32) -> Interval {
    assert!(x.is_positive(), "ln needs a positive argument");
    let one = BigRational::one();
    let t = (x - &one) / (x + &one);
    let t2 = &t * &t;
    let two = ratio(2, 1);
    let mut sum = BigRational::zero();
    let mut power = t.clone();
    for k in 0..terms {
        sum += &two * &power / BigRational::from_integer((2 * k + 1).into());
        power *= &t2;
    }
    let tail =
        &two * power.abs() / (BigRational::from_integer((2 * terms + 1).into()) * (&one - &t2));
    if t.is_negative() {
        Interval {
            lo: &sum - &tail,
            hi: sum,
        }
    } else {
        Interval {
            lo: sum.clone(),
            hi: sum + tail,
        }
    }
}

/// Outcome of checking `2^(1/2) (13/16)^(1/8) 2^(-0.628 (0.25 - u)) < 2^0.41385`
/// with `u = 0.1723`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantCheck {
    /// `(1 - u) / 2 == 0.41385` exactly.
    pub exponent_identity: bool,
    /// Enclosure of `ln(lhs) - ln(rhs)`, as decimals.
    pub log_gap_lo: f64,
    pub log_gap_hi: f64,
    pub holds: bool,
}

pub fn upper_bound_constant_check() -> ConstantCheck {
    let u = ratio(1723, 10000);
    let target = ratio(41385, 100000);
    let exponent_identity = (BigRational::one() - &u) / ratio(2, 1) == target;

    // ln(lhs) - ln(rhs) = (1/2 - 0.628 (0.25 - u) - 0.41385) ln 2 + (1/8) ln(13/16)
    let a = ratio(1, 2) - ratio(628, 1000) * (ratio(1, 4) - &u) - &target;
    let ln2 = ln_enclosure(&ratio(2, 1), 60);
    let ln13_16 = ln_enclosure(&ratio(13, 16), 60);
    let gap = ln2.scale(&a).add(&ln13_16.scale(&ratio(1, 8)));
    ConstantCheck {
        exponent_identity,
        log_gap_lo: gap.lo.to_f64().unwrap_or(f64::NAN),
        log_gap_hi: gap.hi.to_f64().unwrap_or(f64::NAN),
        holds: gap.hi.is_negative(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::fold_by_frobenius;

    #[test]
    fn small_values_match_reference() {
        let cfg = EnumConfig::default();
        for f in 1..=12 {
            assert_eq!(
                count_med(f, &cfg).unwrap().total,
                MED_REFERENCE[f as usize - 1],
                "f={f}"
            );
        }
    }

    #[test]
    fn mask_route_agrees_with_semigroup_route() {
        let cfg = EnumConfig::default();
        for f in [9, 14, 17] {
            let via_semigroup = fold_by_frobenius(
                f,
                &cfg,
                || 0u64,
                |acc, s| *acc += u64::from(s.is_med()),
                |acc, part| *acc += part,
            )
            .unwrap();
            let via_profile = fold_by_frobenius(
                f,
                &cfg,
                || 0u64,
                |acc, s| *acc += u64::from(s.profile().med),
                |acc, part| *acc += part,
            )
            .unwrap();
            let direct = count_med(f, &cfg).unwrap().total;
            assert_eq!(direct, via_semigroup);
            assert_eq!(direct, via_profile);
        }
    }

    #[test]
    fn shift_examples() {
        let cfg = EnumConfig::default();
        assert_eq!(count_med_by_shift(2, 3, &cfg).unwrap(), 1);
        assert_eq!(count_med_by_shift(4, 3, &cfg).unwrap(), 1);
        assert_eq!(count_med_by_shift(3, 3, &cfg).unwrap(), 0);
        assert_eq!(med_by_shift(11, &cfg).unwrap(), 22);
    }

    #[test]
    fn bounds_examples() {
        let b = med_bounds_check(30, 1949);
        assert!(b.lower_ok);
        assert!(med_bounds_check(1, 1).lower_ok);
        // 2^(30-8) = 4194304 > 161^3 = 4173281, so 161 fails at f = 30.
        assert!(!med_bounds_check(30, 161).lower_ok);
        assert!(med_bounds_check(30, 162).lower_ok);
    }

    #[test]
    fn growth_values() {
        let r = growth_row(30, 1949);
        assert!((r.log2_med_over_f - 0.36428).abs() < 1e-5);
        assert_eq!(growth_row(1, 1).log2_med_over_f, 0.0);
    }

    #[test]
    fn ln_enclosure_brackets_f64() {
        for (p, q) in [(2, 1), (13, 16), (1, 3), (7, 5)] {
            let iv = ln_enclosure(&ratio(p, q), 40);
            let x = (p as f64 / q as f64).ln();
            assert!(iv.lo.to_f64().unwrap() <= x + 1e-15);
            assert!(iv.hi.to_f64().unwrap() >= x - 1e-15);
            assert!((&iv.hi - &iv.lo).to_f64().unwrap() < 1e-12);
        }
    }

    #[test]
    fn constant_inequality() {
        let c = upper_bound_constant_check();
        assert!(c.exponent_identity);
        assert!(c.holds);
        // log2 gap ≈ 0.413759 - 0.41385, i.e. about -9.1e-5 in log2 units.
        let gap_log2 = c.log_gap_hi / std::f64::consts::LN_2;
        assert!((gap_log2 + 9.1e-5).abs() < 2e-6, "{gap_log2}");
    }
}
