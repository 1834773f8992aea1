//! Exhaustive enumeration of numerical semigroups by Frobenius number, by
//! genus and by multiplicity.
//!
//! Both searches split their tree after the first few branching decisions
//! into independent subtrees. Subtrees are folded separately and merged in
//! a fixed order, so results do not depend on the number of workers.

mod brute;
mod budget;
mod census;
pub(crate) mod frobenius;
pub(crate) mod genus;

use std::time::Duration;

use rayon::prelude::*;

pub use brute::{brute_force_by_frobenius, BRUTE_FORCE_MAX_F};
pub use census::{FrobeniusCensus, GenusCensus};
pub use frobenius::MAX_FROBENIUS;
pub use genus::MAX_GENUS;

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use frobenius::{Constraints, LeafSink};

/// Knobs shared by every enumerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// 1 runs the search on the calling thread in a fixed visiting order.
    pub workers: usize,
    /// Number of branching decisions taken before the tree is split into tasks.
    pub split_depth: u32,
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            workers: 1,
            split_depth: 8,
            max_nodes: None,
            max_time: None,
        }
    }
}

impl EnumConfig {
    pub fn with_workers(workers: usize) -> Self {
        EnumConfig {
            workers: workers.max(1),
            ..Default::default()
        }
    }
}

/// Runs `tasks` on `cfg.workers` threads and returns the per-task results
/// in task order.
pub(crate) fn run_tasks<T, R, F>(cfg: &EnumConfig, tasks: Vec<T>, run: F) -> Result<Vec<R>>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    if cfg.workers <= 1 {
        return tasks.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(run).collect())
}

struct CensusSink<'v> {
    census: FrobeniusCensus,
    visitor: Option<&'v (dyn Fn(&Semigroup) + Sync)>,
}

impl LeafSink for CensusSink<'_> {
    fn leaf(&mut self, f: u32, members: u128) {
        let n = members.count_ones() - 1;
        let m = if n == 0 {
            f + 1
        } else {
            (members & !1).trailing_zeros()
        };
        self.census.record(n, m, (f + 1).div_ceil(m));
        if let Some(v) = self.visitor {
            v(&Semigroup::from_mask(f, members));
        }
    }

    fn absorb(&mut self, other: Self) {
        self.census.merge(&other.census);
    }
}

fn census_with(
    f: u32,
    cfg: &EnumConfig,
    constraints: Constraints,
    visitor: Option<&(dyn Fn(&Semigroup) + Sync)>,
) -> Result<FrobeniusCensus> {
    let sink = frobenius::search(f, constraints, cfg, || CensusSink {
        census: FrobeniusCensus::empty(f),
        visitor,
    })?;
    Ok(sink.census)
}

/// Census of all semigroups with Frobenius number `f`.
pub fn frobenius_census(f: u32, cfg: &EnumConfig) -> Result<FrobeniusCensus> {
    census_with(f, cfg, Constraints::none(), None)
}

/// Visits every semigroup with Frobenius number `f` exactly once.
///
/// With more than one worker the visitor may run concurrently and in any
/// order; the returned census is the same either way.
pub fn enumerate_by_frobenius<V>(f: u32, cfg: &EnumConfig, visitor: V) -> Result<FrobeniusCensus>
where
    V: Fn(&Semigroup) + Sync,
{
    census_with(f, cfg, Constraints::none(), Some(&visitor))
}

struct FoldSink<'a, A, L> {
    acc: A,
    leaf: &'a L,
    merge: &'a (dyn Fn(&mut A, A) + Sync),
}

impl<A: Send, L: Fn(&mut A, &Semigroup) + Sync> LeafSink for FoldSink<'_, A, L> {
    fn leaf(&mut self, f: u32, members: u128) {
        (self.leaf)(&mut self.acc, &Semigroup::from_mask(f, members));
    }

    fn absorb(&mut self, other: Self) {
        (self.merge)(&mut self.acc, other.acc);
    }
}

/// Map-reduce over the semigroups with Frobenius number `f`.
///
/// Each subtree folds into a fresh `init()`; partial results are merged in
/// a fixed task order, so even a non-commutative `merge` is deterministic.
pub fn fold_by_frobenius<A, I, L, M>(
    f: u32,
    cfg: &EnumConfig,
    init: I,
    leaf: L,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    L: Fn(&mut A, &Semigroup) + Sync,
    M: Fn(&mut A, A) + Sync,
{
    let sink = frobenius::search(f, Constraints::none(), cfg, || FoldSink {
        acc: init(),
        leaf: &leaf,
        merge: &merge,
    })?;
    Ok(sink.acc)
}

/// `N_mul(m, f)`: semigroups with Frobenius number `f` and multiplicity `m`.
/// Impossible combinations (for example `m = f`) count as zero.
pub fn count_by_multiplicity(m: u32, f: u32, cfg: &EnumConfig) -> Result<u64> {
    if m < 2 || m > f + 1 || m == f {
        return Ok(0);
    }
    let mut c = Constraints::none();
    for x in 1..m.min(f) {
        c.forbid(x);
    }
    if m < f {
        c.require(m);
    }
    Ok(census_with(f, cfg, c, None)?.total)
}

/// Semigroups with Frobenius number `f` that contain `x`.
pub fn count_containing(f: u32, x: u32, cfg: &EnumConfig) -> Result<u64> {
    if x == f {
        return Ok(0);
    }
    let mut c = Constraints::none();
    if x > 0 && x < f {
        c.require(x);
    }
    Ok(census_with(f, cfg, c, None)?.total)
}

/// Census of all semigroups of genus `g`.
pub fn genus_census(g: u32, cfg: &EnumConfig) -> Result<GenusCensus> {
    genus::census(g, cfg, None)
}

/// Visits every semigroup of genus `g` exactly once, walking the tree rooted
/// at the naturals in which children remove one minimal generator larger
/// than the parent's Frobenius number.
pub fn enumerate_by_genus<V>(g: u32, cfg: &EnumConfig, visitor: V) -> Result<GenusCensus>
where
    V: Fn(&Semigroup) + Sync,
{
    genus::census(g, cfg, Some(&visitor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::sync::Mutex;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn small_totals() {
        for f in 1..=12 {
            assert_eq!(
                frobenius_census(f, &cfg()).unwrap(),
                brute_force_by_frobenius(f).unwrap()
            );
        }
        assert_eq!(frobenius_census(5, &cfg()).unwrap().total, 5);
        assert_eq!(frobenius_census(6, &cfg()).unwrap().total, 4);
        assert_eq!(frobenius_census(7, &cfg()).unwrap().total, 11);
    }

    #[test]
    fn f7_breakdown() {
        let c = frobenius_census(7, &cfg()).unwrap();
        let by_m: BTreeMap<u32, u64> = [(2, 1), (3, 2), (4, 4), (5, 2), (6, 1), (8, 1)].into();
        assert_eq!(c.by_multiplicity, by_m);
        let by_n: BTreeMap<u32, u64> = [(0, 1), (1, 3), (2, 4), (3, 3)].into();
        assert_eq!(c.by_n, by_n);
    }

    #[test]
    fn multiplicity_counts() {
        for f in 1..=12 {
            let c = frobenius_census(f, &cfg()).unwrap();
            for m in 2..=f + 1 {
                let direct = count_by_multiplicity(m, f, &cfg()).unwrap();
                assert_eq!(
                    direct,
                    c.by_multiplicity.get(&m).copied().unwrap_or(0),
                    "m={m} f={f}"
                );
            }
        }
        assert_eq!(count_by_multiplicity(8, 7, &cfg()).unwrap(), 1);
        assert_eq!(count_by_multiplicity(3, 7, &cfg()).unwrap(), 2);
        assert_eq!(count_by_multiplicity(4, 7, &cfg()).unwrap(), 4);
        assert_eq!(count_by_multiplicity(7, 7, &cfg()).unwrap(), 0);
        assert_eq!(count_by_multiplicity(9, 7, &cfg()).unwrap(), 0);
    }

    #[test]
    fn visitor_sees_every_semigroup_once() {
        let seen = Mutex::new(Vec::new());
        let c = enumerate_by_frobenius(11, &EnumConfig::with_workers(4), |s| {
            seen.lock().unwrap().push(s.clone());
        })
        .unwrap();
        let mut seen = seen.into_inner().unwrap();
        assert_eq!(seen.len() as u64, c.total);
        seen.sort_by_key(|s| s.to_mask());
        seen.dedup();
        assert_eq!(seen.len() as u64, c.total);
        assert!(seen.iter().all(|s| s.frobenius() == 11));
    }

    #[test]
    fn node_budget_is_enforced() {
        let tight = EnumConfig {
            max_nodes: Some(50),
            ..Default::default()
        };
        assert!(matches!(
            frobenius_census(20, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            genus_census(12, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        let zero_time = EnumConfig {
            max_time: Some(Duration::ZERO),
            workers: 2,
            ..Default::default()
        };
        assert!(matches!(
            frobenius_census(30, &zero_time),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn genus_small_totals() {
        assert_eq!(genus_census(0, &cfg()).unwrap().total, 1);
        assert_eq!(genus_census(3, &cfg()).unwrap().total, 4);
        assert_eq!(genus_census(7, &cfg()).unwrap().total, 39);
    }

    #[test]
    fn containing_counts() {
        // Frobenius 1 semigroups containing 2: just {0, 2→}.
        assert_eq!(count_containing(1, 2, &cfg()).unwrap(), 1);
        assert_eq!(count_containing(5, 5, &cfg()).unwrap(), 0);
        assert_eq!(count_containing(7, 3, &cfg()).unwrap(), 2);
    }
}
