use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::genus_analytics::TypeKA;

fn bump(map: &mut BTreeMap<u32, u64>, key: u32, by: u64) {
    *map.entry(key).or_default() += by;
}

fn merge_maps<K: Ord + Clone>(into: &mut BTreeMap<K, u64>, from: &BTreeMap<K, u64>) {
    for (k, v) in from {
        *into.entry(k.clone()).or_default() += v;
    }
}

/// Counts of the semigroups with one Frobenius number, broken down by
/// `n = |S ∩ [1, f]|`, multiplicity and depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusCensus {
    pub f: u32,
    pub total: u64,
    pub by_n: BTreeMap<u32, u64>,
    pub by_multiplicity: BTreeMap<u32, u64>,
    pub by_depth: BTreeMap<u32, u64>,
}

impl FrobeniusCensus {
    pub fn empty(f: u32) -> Self {
        FrobeniusCensus {
            f,
            total: 0,
            by_n: BTreeMap::new(),
            by_multiplicity: BTreeMap::new(),
            by_depth: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, n: u32, m: u32, q: u32) {
        self.total += 1;
        bump(&mut self.by_n, n, 1);
        bump(&mut self.by_multiplicity, m, 1);
        bump(&mut self.by_depth, q, 1);
    }

    /// Component-wise sum.
    pub fn merge(&mut self, other: &FrobeniusCensus) {
        debug_assert_eq!(self.f, other.f);
        self.total += other.total;
        merge_maps(&mut self.by_n, &other.by_n);
        merge_maps(&mut self.by_multiplicity, &other.by_multiplicity);
        merge_maps(&mut self.by_depth, &other.by_depth);
    }

    pub fn depth_count(&self, q: u32) -> u64 {
        self.by_depth.get(&q).copied().unwrap_or(0)
    }
}

/// Counts of the semigroups of one genus, split by depth class.
///
/// `depth1` holds the depth-1 semigroups (and the naturals at genus 0),
/// `by_2m_minus_f` the depth-2 ones keyed by `2m - F`, `by_type` the depth-3
/// ones keyed by their type `(k; A)`, and `deep` those with `F > 3m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusCensus {
    pub g: u32,
    pub total: u64,
    pub depth1: u64,
    pub by_2m_minus_f: BTreeMap<u32, u64>,
    #[serde(serialize_with = "serialize_types")]
    pub by_type: BTreeMap<TypeKA, u64>,
    pub deep: u64,
    /// `|F - 2m|` for every semigroup of depth >= 2.
    pub by_abs_f_minus_2m: BTreeMap<u32, u64>,
}

impl GenusCensus {
    pub fn empty(g: u32) -> Self {
        GenusCensus {
            g,
            total: 0,
            depth1: 0,
            by_2m_minus_f: BTreeMap::new(),
            by_type: BTreeMap::new(),
            deep: 0,
            by_abs_f_minus_2m: BTreeMap::new(),
        }
    }

    /// Records one semigroup given its Frobenius number, multiplicity and,
    /// for depth 3, its type.
    pub(crate) fn record(&mut self, frobenius: i32, m: u32, ty: Option<TypeKA>) {
        self.total += 1;
        let two_m = 2 * m as i64;
        let f = frobenius as i64;
        if f < m as i64 {
            self.depth1 += 1;
            return;
        }
        bump(
            &mut self.by_abs_f_minus_2m,
            (f - two_m).unsigned_abs() as u32,
            1,
        );
        if f < two_m {
            bump(&mut self.by_2m_minus_f, (two_m - f) as u32, 1);
        } else if f < 3 * m as i64 {
            let ty = ty.expect("depth-3 semigroup recorded without a type");
            *self.by_type.entry(ty).or_default() += 1;
        } else {
            self.deep += 1;
        }
    }

    pub fn merge(&mut self, other: &GenusCensus) {
        debug_assert_eq!(self.g, other.g);
        self.total += other.total;
        self.depth1 += other.depth1;
        self.deep += other.deep;
        merge_maps(&mut self.by_2m_minus_f, &other.by_2m_minus_f);
        merge_maps(&mut self.by_type, &other.by_type);
        merge_maps(&mut self.by_abs_f_minus_2m, &other.by_abs_f_minus_2m);
    }

    pub fn depth2_total(&self) -> u64 {
        self.by_2m_minus_f.values().sum()
    }

    pub fn depth3_total(&self) -> u64 {
        self.by_type.values().sum()
    }
}

fn serialize_types<S: Serializer>(
    map: &BTreeMap<TypeKA, u64>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        k: u32,
        a: &'a crate::SmallSet,
        count: u64,
    }
    serializer.collect_seq(map.iter().map(|(t, &count)| Row {
        k: t.k,
        a: &t.a,
        count,
    }))
}
