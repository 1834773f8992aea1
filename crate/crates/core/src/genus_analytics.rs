//! Counting by genus: Fibonacci laws for depth-2 semigroups, the `(k; A)`
//! types of depth-3 semigroups, and tail masses of `|F - 2m|`.

use serde::Serialize;

use crate::enumerate::{genus_census, EnumConfig, GenusCensus};
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::smallset::SmallSet;

/// Fibonacci numbers with `F_1 = F_2 = 1` and `F_n = 0` for `n <= 0`.
#[derive(Clone, Debug)]
pub struct FibSequence {
    memo: Vec<u64>,
}

impl Default for FibSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl FibSequence {
    /// `F_93` is the last value that fits in a `u64`.
    pub const MAX_INDEX: i64 = 93;

    pub fn new() -> Self {
        FibSequence { memo: vec![0, 1] }
    }

    /// Panics for `n > 93`.
    pub fn get(&mut self, n: i64) -> u64 {
        if n <= 0 {
            return 0;
        }
        assert!(n <= Self::MAX_INDEX, "F_{n} overflows u64");
        let n = n as usize;
        while self.memo.len() <= n {
            let k = self.memo.len();
            self.memo.push(self.memo[k - 1] + self.memo[k - 2]);
        }
        self.memo[n]
    }
}

pub fn fibonacci(n: i64) -> u64 {
    FibSequence::new().get(n)
}

/// A depth-3 type `(k; A)` with `A ⊆ [0, k - 1]`, `0 ∈ A` and `k ∉ A + A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TypeKA {
    pub k: u32,
    pub a: SmallSet,
}

impl TypeKA {
    pub const MAX_K: u32 = 31;

    pub fn new(k: u32, a: SmallSet) -> Result<Self> {
        if k == 0 || k > Self::MAX_K {
            return Err(Error::InvalidArgument(format!(
                "type index k = {k} out of range"
            )));
        }
        let t = TypeKA { k, a };
        if !t.is_admissible() {
            return Err(Error::InvalidArgument(format!("{a:?} is not in A_{k}")));
        }
        Ok(t)
    }

    pub(crate) fn new_unchecked(k: u32, a: u64) -> Self {
        let t = TypeKA {
            k,
            a: SmallSet::from_mask(a),
        };
        debug_assert!(t.is_admissible(), "{t:?}");
        t
    }

    pub fn is_admissible(&self) -> bool {
        let below_k = self.a.max().is_none_or(|x| x < self.k);
        below_k && self.a.contains(0) && !self.a.sumset().contains(self.k)
    }

    /// `|(A + A) ∩ [0, k]|`.
    pub fn sumset_size(&self) -> u32 {
        let keep = (1u64 << (self.k + 1)) - 1;
        (self.a.sumset().mask() & keep).count_ones()
    }

    /// Index `g - |(A+A) ∩ [0,k]| + |A| - k - 1` of the Fibonacci bound.
    pub fn bound_index(&self, g: u32) -> i64 {
        g as i64 - self.sumset_size() as i64 + self.a.len() as i64 - self.k as i64 - 1
    }
}

/// All of `A_k`, ordered lexicographically as sorted element lists.
pub fn enumerate_ak(k: u32) -> Result<Vec<TypeKA>> {
    const MAX_SCAN_K: u32 = 24;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > MAX_SCAN_K {
        return Err(Error::OutOfBudget {
            what: "A_k index",
            value: k as u64,
            max: MAX_SCAN_K as u64,
        });
    }
    let mut out: Vec<TypeKA> = (0u64..1 << (k - 1))
        .map(|rest| TypeKA {
            k,
            a: SmallSet::from_mask(1 | rest << 1),
        })
        .filter(TypeKA::is_admissible)
        .collect();
    out.sort_by_cached_key(|t| t.a.to_vec());
    Ok(out)
}

/// Type of a depth-3 semigroup.
pub fn type_of(s: &Semigroup) -> Result<TypeKA> {
    let p = s.profile();
    if p.q != 3 {
        return Err(Error::NotDepth3 { depth: p.q });
    }
    let (f, m) = (p.f as u32, p.m);
    let k = f - 2 * m;
    let a: SmallSet = (0..k).filter(|&i| s.contains((m + i) as u64)).collect();
    TypeKA::new(k, a)
}

/// Number of genus-`g` semigroups with `2m - F = k`.
pub fn count_2m_minus_f(g: u32, k: u32, cfg: &EnumConfig) -> Result<u64> {
    Ok(genus_census(g, cfg)?
        .by_2m_minus_f
        .get(&k)
        .copied()
        .unwrap_or(0))
}

/// Number of depth-2 semigroups of genus `g`.
pub fn depth2_by_genus(g: u32, cfg: &EnumConfig) -> Result<u64> {
    Ok(genus_census(g, cfg)?.depth2_total())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeBoundRow {
    pub k: u32,
    pub a: SmallSet,
    pub count: u64,
    pub bound_index: i64,
    pub bound: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub g: u32,
    pub rows: Vec<TypeBoundRow>,
}

impl TypeCensus {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Checks every observed type count against its Fibonacci bound. Types
/// absent from the census have count 0 and hold trivially.
pub fn type_census_from(census: &GenusCensus) -> TypeCensus {
    let mut fib = FibSequence::new();
    let rows = census
        .by_type
        .iter()
        .map(|(t, &count)| {
            let bound_index = t.bound_index(census.g);
            let bound = fib.get(bound_index);
            TypeBoundRow {
                k: t.k,
                a: t.a,
                count,
                bound_index,
                bound,
                holds: count <= bound && (count == 0 || bound_index > 0),
            }
        })
        .collect();
    TypeCensus { g: census.g, rows }
}

pub fn type_census(g: u32, cfg: &EnumConfig) -> Result<TypeCensus> {
    Ok(type_census_from(&genus_census(g, cfg)?))
}

/// Fraction of genus-`g` semigroups of depth >= 2 with `|F - 2m| > n`,
/// relative to all semigroups of genus `g`.
pub fn tail_mass_from(census: &GenusCensus, n: u32) -> f64 {
    if census.total == 0 {
        return 0.0;
    }
    let tail: u64 = census
        .by_abs_f_minus_2m
        .range(n + 1..)
        .map(|(_, c)| c)
        .sum();
    tail as f64 / census.total as f64
}

pub fn tail_mass_f_2m(g: u32, n: u32, cfg: &EnumConfig) -> Result<f64> {
    Ok(tail_mass_from(&genus_census(g, cfg)?, n))
}

/// Fraction of genus-`g` semigroups with `F > 3m`.
pub fn deep_fraction(census: &GenusCensus) -> f64 {
    if census.total == 0 {
        return 0.0;
    }
    census.deep as f64 / census.total as f64
}
