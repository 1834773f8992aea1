use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use numsemi_core::classify::{
    class_count, class_count_by_n, class_partition, enumerate_class_keys,
    multiplicity_tail_bound_holds,
};
use numsemi_core::distribution::{
    concentration_mass_from, empirical_distribution, h_polynomial, DensityModel,
};
use numsemi_core::enumerate::{
    count_by_multiplicity, enumerate_by_genus, fold_by_frobenius, frobenius_census, genus_census,
};
use numsemi_core::genus_analytics::{deep_fraction, fibonacci, tail_mass_from};
use numsemi_core::med::count_med;
use numsemi_core::{ClassKey, EnumConfig, Parity, Semigroup, SmallSet};

fn serial() -> EnumConfig {
    EnumConfig::default()
}

fn all_with_frobenius(f: u32) -> Vec<Semigroup> {
    fold_by_frobenius(
        f,
        &serial(),
        Vec::new,
        |acc: &mut Vec<Semigroup>, s| acc.push(s.clone()),
        |acc, part| acc.extend(part),
    )
    .unwrap()
}

/// Embedding dimension by the textbook definition: nonzero members that are
/// not a sum of two nonzero members.
fn naive_embedding_dimension(s: &Semigroup) -> u32 {
    let m = s.multiplicity() as u64;
    let top = s.frobenius().max(0) as u64 + m;
    (1..=top)
        .filter(|&x| s.contains(x))
        .filter(|&x| !(1..x).any(|a| s.contains(a) && s.contains(x - a)))
        .count() as u32
}

#[test]
fn exhaustive_small_invariants() {
    for f in 1..=18u32 {
        let fb = (f - 1) / 2;
        for s in all_with_frobenius(f) {
            let p = s.profile();
            let members: Vec<u32> = s.small_members().collect();
            assert_eq!(Semigroup::build(f, members.iter().copied()).unwrap(), s);
            assert_eq!(s.is_med(), p.e == p.m, "{s}");
            assert_eq!(p.e, naive_embedding_dimension(&s), "{s}");
            assert!(p.n <= fb, "{s}");
            assert_eq!(p.n + p.g, f);
        }
    }
}

/// Genus-`g` semigroups by brute force over gap sets inside `[1, 2g - 1]`.
fn brute_genus(g: u32) -> BTreeMap<(i32, u32), u64> {
    let mut out = BTreeMap::new();
    if g == 0 {
        out.insert((-1, 1), 1);
        return out;
    }
    let width = 2 * g - 1;
    for gaps in 0u32..1 << width {
        if gaps.count_ones() != g || gaps & 1 == 0 {
            continue;
        }
        let member = |x: u32| x > width || gaps >> (x - 1) & 1 == 0;
        let closed = (1..=width).filter(|&a| member(a)).all(|a| {
            (1..=width)
                .filter(|&b| member(b))
                .all(|b| a + b > width || member(a + b))
        });
        if closed {
            let f = 32 - gaps.leading_zeros();
            let m = (1..).find(|&x| member(x)).unwrap();
            *out.entry((f as i32, m)).or_default() += 1;
        }
    }
    out
}

#[test]
fn genus_walk_matches_gap_set_oracle() {
    for g in 0..=10u32 {
        let oracle = brute_genus(g);
        let seen = std::sync::Mutex::new(BTreeMap::<(i32, u32), u64>::new());
        let census = enumerate_by_genus(g, &serial(), |s| {
            *seen
                .lock()
                .unwrap()
                .entry((s.frobenius(), s.multiplicity()))
                .or_default() += 1;
        })
        .unwrap();
        assert_eq!(seen.into_inner().unwrap(), oracle, "g={g}");
        assert_eq!(census.total, oracle.values().sum::<u64>());
    }
}

#[test]
fn genus_and_frobenius_enumerations_agree() {
    let cfg = EnumConfig::with_workers(4);
    let mut by_genus = BTreeMap::<u32, u64>::new();
    for f in 1..=28u32 {
        for (n, c) in frobenius_census(f, &cfg).unwrap().by_n {
            *by_genus.entry(f - n).or_default() += c;
        }
    }
    for g in 1..=14u32 {
        assert_eq!(genus_census(g, &cfg).unwrap().total, by_genus[&g], "g={g}");
    }
}

#[test]
fn sandwich_and_multiplicity_bounds() {
    let cfg = EnumConfig::with_workers(4);
    for f in 1..=33u32 {
        let c = frobenius_census(f, &cfg).unwrap();
        if f >= 3 {
            let base = 1u64 << ((f - 1) / 2);
            assert!(base <= c.total && c.total < 4 * base, "f={f}");
        }
        for m in 2..=f + 1 {
            let n_mul = c.by_multiplicity.get(&m).copied().unwrap_or(0);
            if f <= 20 {
                assert_eq!(count_by_multiplicity(m, f, &cfg).unwrap(), n_mul);
            }
            if 2 * m < f {
                assert!(multiplicity_tail_bound_holds(m, f, n_mul), "m={m} f={f}");
            }
        }
    }
}

#[test]
fn fibonacci_diagonal_sums() {
    let choose = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
    for n in 0..=30u64 {
        let sum: u64 = (0..=n / 2).map(|k| choose(n - k, k)).sum();
        assert_eq!(fibonacci(n as i64 + 1), sum, "n={n}");
    }
}

#[test]
fn genus_census_breakdowns() {
    let cfg = EnumConfig::with_workers(4);
    for g in 1..=14u32 {
        let c = genus_census(g, &cfg).unwrap();
        let k_sum: u64 = c.by_2m_minus_f.values().sum();
        assert_eq!(k_sum, c.depth2_total());
        assert_eq!(
            c.depth1 + c.depth2_total() + c.depth3_total() + c.deep,
            c.total
        );
        assert_eq!(tail_mass_from(&c, 2 * g), 0.0);
    }
}

#[test]
fn deep_tail_measured_value() {
    let c = genus_census(14, &serial()).unwrap();
    assert_eq!((c.deep, c.total), (298, 1693));
}

#[test]
#[ignore = "fails at desk scale: the F > 3m fraction at g = 14 is 298/1693, about 0.176"]
fn deep_tail_below_five_percent() {
    let c = genus_census(14, &serial()).unwrap();
    assert!(deep_fraction(&c) < 0.05, "{}", deep_fraction(&c));
}

#[test]
fn class_partition_properties() {
    let cfg = EnumConfig::with_workers(4);
    for f in 1..=24u32 {
        let fb = (f - 1) / 2;
        let partition = class_partition(f, &cfg).unwrap();
        let empty = partition.get(&ClassKey::Empty).map_or(0, |t| t.total);
        assert_eq!(empty, 1u64 << fb, "f={f}");
        for (key, tally) in &partition {
            let ClassKey::Deep(yz) = key else { continue };
            assert!(yz.y.is_disjoint(yz.z), "f={f} {yz:?}");
            if f > 6 * yz.max_y() + 6 {
                assert_eq!(
                    class_count(yz, f).unwrap(),
                    tally.total.into(),
                    "f={f} {yz:?}"
                );
                for (&n, &c) in &tally.by_n {
                    assert_eq!(class_count_by_n(yz, f, n).unwrap(), c.into());
                }
            }
        }
    }
}

#[test]
fn h_polynomial_identities() {
    for l in 0..=5u32 {
        for parity in [Parity::Odd, Parity::Even] {
            let h = h_polynomial(l, parity).unwrap();
            let beta_zero = enumerate_class_keys(l)
                .unwrap()
                .iter()
                .filter(|k| k.beta() == 0)
                .count();
            assert_eq!(h.evaluate(&BigRational::zero()), BigRational::one());
            assert_eq!(
                h.evaluate(&BigRational::one()),
                BigRational::from_integer((1 + beta_zero).into())
            );
            if parity == Parity::Odd {
                assert!(h.degree() <= 3 * l as usize + 2, "L={l}");
            }
        }
    }
}

#[test]
fn density_mass_near_one_for_small_l() {
    for f in [31u32, 33, 35, 37, 39, 41] {
        for l in 0..=1 {
            let m = DensityModel::new(f, l).unwrap();
            assert!((0..=(f - 1) / 2).all(|n| m.density(n) >= 0.0));
            let mass = m.total_mass();
            assert!((0.95..=1.05).contains(&mass), "f={f} L={l}: {mass}");
        }
    }
}

#[test]
fn density_mass_tends_to_one() {
    for l in 0..=5u32 {
        let masses: Vec<f64> = [6 * l + 7, 101, 401, 1601]
            .iter()
            .map(|&f| DensityModel::new(f, l).unwrap().total_mass())
            .collect();
        assert!(masses
            .windows(2)
            .all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs()));
        assert!((masses[3] - 1.0).abs() < 0.01, "L={l}: {masses:?}");
    }
}

#[test]
#[ignore = "fails: the finite-f mass exceeds 1.05 for L >= 2 at f = 31 (1.074 at L = 2)"]
fn density_mass_within_five_percent() {
    for f in 31u32..=41 {
        for l in 0..=5 {
            if f > 6 * l + 6 {
                let mass = DensityModel::new(f, l).unwrap().total_mass();
                assert!((0.95..=1.05).contains(&mass), "f={f} L={l}: {mass}");
            }
        }
    }
}

#[test]
fn concentration_trend() {
    let cfg = EnumConfig::with_workers(4);
    let t19 = empirical_distribution(19, &cfg).unwrap();
    let t39 = empirical_distribution(39, &cfg).unwrap();
    assert_eq!(concentration_mass_from(&t19, 10.0), 1.0);
    let c19 = concentration_mass_from(&t19, 0.25);
    let c39 = concentration_mass_from(&t39, 0.25);
    assert!(c39 > 0.8 && c19 <= c39, "{c19} {c39}");
}

#[test]
fn med_density_decreases() {
    let ratio = |f: u32| {
        count_med(f, &serial()).unwrap().total as f64
            / frobenius_census(f, &serial()).unwrap().total as f64
    };
    assert!(ratio(30) < ratio(10));
}

fn naive_sumset(a: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| x + y))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn worker_count_does_not_change_censuses(
        f in 1u32..=24,
        g in 0u32..=11,
        workers in 2usize..=8,
        split in 0u32..=12,
    ) {
        let cfg = EnumConfig { workers, split_depth: split, ..EnumConfig::default() };
        prop_assert_eq!(frobenius_census(f, &serial()).unwrap(), frobenius_census(f, &cfg).unwrap());
        prop_assert_eq!(genus_census(g, &serial()).unwrap(), genus_census(g, &cfg).unwrap());
    }

    #[test]
    fn random_semigroups_round_trip(f in 1u32..=20, pick in any::<prop::sample::Index>()) {
        let all = all_with_frobenius(f);
        let s = pick.get(&all);
        let members: Vec<u32> = s.small_members().collect();
        let rebuilt = Semigroup::build(f, members).unwrap();
        prop_assert_eq!(&rebuilt, s);
        prop_assert_eq!(rebuilt.profile(), s.profile());
        let gens = s.min_generators();
        prop_assert_eq!(gens.len() as u32, s.profile().e);
        prop_assert_eq!(gens[0], s.multiplicity());
    }

    #[test]
    fn sumset_matches_naive(elems in prop::collection::btree_set(0u32..31, 0..8)) {
        let set: SmallSet = elems.iter().copied().collect();
        let v: Vec<u32> = elems.into_iter().collect();
        prop_assert_eq!(set.sumset().to_vec(), naive_sumset(&v));
    }

    #[test]
    fn class_count_is_sum_over_n(key_index in any::<prop::sample::Index>(), f in 19u32..=60) {
        let keys = enumerate_class_keys(2).unwrap();
        let key = key_index.get(&keys);
        let total = class_count(key, f).unwrap();
        let by_n = (0..=(f - 1) / 2)
            .map(|n| class_count_by_n(key, f, n).unwrap())
            .fold(num_bigint::BigUint::zero(), |a, b| a + b);
        prop_assert_eq!(total, by_n);
    }

    #[test]
    fn density_model_is_finite(f in 31u32..=80, l in 0u32..=4) {
        let m = DensityModel::new(f, l).unwrap();
        let mass = m.total_mass();
        prop_assert!(mass.is_finite() && mass > 0.9);
        prop_assert!(m.normalizer.to_f64().unwrap() >= 1.0);
    }
}
