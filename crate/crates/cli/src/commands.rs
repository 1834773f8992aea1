use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use numsemi_core::classify::{
    class_count, class_partition, constant_partial_sum, enumerate_class_keys, verify_monotonicity,
};
use numsemi_core::distribution::{
    compare, empirical_distribution, natural_l, quoted_h2, DensityModel,
};
use numsemi_core::enumerate::{count_by_multiplicity, frobenius_census, genus_census};
use numsemi_core::genus_analytics::{deep_fraction, tail_mass_from, type_census_from, FibSequence};
use numsemi_core::med::{
    count_med, growth_row, med_bounds_check, med_by_shift, upper_bound_constant_check,
    MED_REFERENCE,
};
use numsemi_core::util::fbar;
use numsemi_core::{ClassKey, EnumConfig, Error, Parity, Result};

use crate::report::{Cell, Report};
use crate::{Command, Polynomial, Verify};

pub(crate) fn execute(
    cmd: &Command,
    cfg: &EnumConfig,
    err: &mut dyn Write,
) -> Result<(Report, bool)> {
    match *cmd {
        Command::Count {
            frobenius,
            genus,
            multiplicity,
        } => match (frobenius, genus, multiplicity) {
            (Some(f), _, Some(m)) => count_mul(f, m, cfg),
            (Some(f), _, None) => count_frobenius(f, cfg),
            (None, Some(g), _) => count_genus(g, cfg),
            (None, None, _) => Err(Error::InvalidArgument("give --frobenius or --genus".into())),
        },
        Command::Dist {
            frobenius,
            max_l,
            polynomial,
        } => dist(frobenius, max_l, polynomial, cfg, err),
        Command::Classes { frobenius, max_l } => classes(frobenius, max_l, cfg),
        Command::Constants { max_l } => constants(max_l),
        Command::Verify(Verify::Monotone { max_f }) => monotone(max_f, cfg),
        Command::Verify(Verify::Formulas { max_f }) => {
            let mut checks = Checks::new();
            formula_checks(max_f, cfg, &mut checks)?;
            Ok(checks.into_report("verify.formulas"))
        }
        Command::Verify(Verify::All { budget }) => verify_all(budget, cfg),
        Command::Med { max_f, shift_max_f } => med(max_f, shift_max_f, cfg),
        Command::Genus {
            max_g,
            tail_n,
            types,
        } => match types {
            Some(g) => genus_types(g, cfg),
            None => genus(max_g, tail_n, cfg),
        },
    }
}

fn count_frobenius(f: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let c = frobenius_census(f, cfg)?;
    let deeper: u64 = c.by_depth.range(4..).map(|(_, v)| v).sum();
    let r = Report::new("count.frobenius")
        .field("f", f)
        .field("N", c.total)
        .field("depth1", c.depth_count(1))
        .field("depth2", c.depth_count(2))
        .field("depth3", c.depth_count(3))
        .field("depth4_plus", deeper);
    Ok((r, true))
}

fn count_mul(f: u32, m: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let n = count_by_multiplicity(m, f, cfg)?;
    let r = Report::new("count.multiplicity")
        .field("f", f)
        .field("m", m)
        .field("N_mul", n);
    Ok((r, true))
}

fn count_genus(g: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let c = genus_census(g, cfg)?;
    let r = Report::new("count.genus")
        .field("g", g)
        .field("n_g", c.total)
        .field("depth1", c.depth1)
        .field("depth2", c.depth2_total())
        .field("depth3", c.depth3_total())
        .field("depth4_plus", c.deep);
    Ok((r, true))
}

/// The distribution report: plot data for one Frobenius number.
pub(crate) fn dist(
    f: u32,
    max_l: Option<u32>,
    polynomial: Polynomial,
    cfg: &EnumConfig,
    err: &mut dyn Write,
) -> Result<(Report, bool)> {
    let table = empirical_distribution(f, cfg)?;
    let mean = table.mean_n();
    let l = max_l.or_else(|| natural_l(f));
    let model = match (l, polynomial) {
        (None, _) => Err(Error::FTooSmall { f, max_y: 0 }),
        (Some(l), Polynomial::Derived) => DensityModel::new(f, l),
        (Some(2), Polynomial::Printed) => DensityModel::with_polynomial(f, quoted_h2()),
        (Some(_), Polynomial::Printed) => Err(Error::InvalidArgument(
            "the printed polynomial exists only for L = 2".into(),
        )),
    };
    let model = match model {
        Ok(m) => Some(m),
        Err(e @ Error::FTooSmall { .. }) => {
            let _ = writeln!(err, "warning: {e}; theory columns omitted");
            None
        }
        Err(e) => return Err(e),
    };
    let base = Report::new("dist")
        .field("f", f)
        .field("L", model.as_ref().map(|m| m.l))
        .field(
            "polynomial",
            Cell::text(format!("{polynomial:?}").to_lowercase()),
        )
        .field("N", table.total)
        .field("mean_n", Cell::rational(&mean))
        .field(
            "mean_genus",
            Cell::rational(&(BigRational::from_integer(f.into()) - &mean)),
        );
    let Some(model) = model else {
        let mut r = base.columns(&["n", "count", "empirical_prob"]);
        for (&n, &count) in &table.counts {
            r.row(vec![n.into(), count.into(), table.probability(n).into()]);
        }
        return Ok((r, true));
    };
    let cmp = compare(&table, &model);
    let mut r = base
        .field("h", Cell::text(model.h.to_string()))
        .field("normalizer", Cell::rational(&model.normalizer))
        .columns(&["n", "count", "empirical_prob", "theory_density", "abs_diff"]);
    for row in &cmp.rows {
        r.row(vec![
            row.n.into(),
            row.count.into(),
            row.empirical_prob.into(),
            row.theory_density.into(),
            row.abs_diff.into(),
        ]);
    }
    let r = r
        .footer("sup_diff", cmp.sup_diff)
        .footer("tv_distance", cmp.tv_distance)
        .footer("theory_mass", model.total_mass());
    Ok((r, true))
}

fn classes(f: u32, max_l: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let keys = enumerate_class_keys(max_l)?;
    let partition = class_partition(f, cfg)?;
    let mut ok = true;
    let mut r = Report::new("classes")
        .field("f", f)
        .field("max_l", max_l)
        .field(
            "empty_class",
            partition.get(&ClassKey::Empty).map_or(0, |t| t.total),
        )
        .columns(&[
            "Y",
            "Z",
            "alpha",
            "alpha_prime",
            "beta",
            "predicted",
            "enumerated",
            "matches",
        ]);
    for key in &keys {
        let enumerated = partition.get(&ClassKey::Deep(*key)).map_or(0, |t| t.total);
        let predicted = match class_count(key, f) {
            Ok(c) => Some(c),
            Err(Error::FTooSmall { .. }) => None,
            Err(e) => return Err(e),
        };
        let matches = predicted.as_ref().map(|p| *p == BigUint::from(enumerated));
        ok &= matches.unwrap_or(true);
        r.row(vec![
            Cell::Set(key.y.to_vec()),
            Cell::Set(key.z.to_vec()),
            key.alpha().into(),
            key.alpha_prime().into(),
            key.beta().into(),
            predicted.map_or(Cell::Null, |p| Cell::text(p.to_string())),
            enumerated.into(),
            matches.into(),
        ]);
    }
    Ok((r, ok))
}

fn constants(max_l: u32) -> Result<(Report, bool)> {
    let mut r = Report::new("constants").field("max_l", max_l).columns(&[
        "L",
        "parity",
        "partial_sum",
        "decimal",
    ]);
    for l in 0..=max_l {
        for parity in [Parity::Odd, Parity::Even] {
            let s = constant_partial_sum(l, parity)?;
            r.row(vec![
                l.into(),
                Cell::text(format!("{parity:?}").to_lowercase()),
                Cell::rational(&s),
                s.to_f64().into(),
            ]);
        }
    }
    Ok((r, true))
}

fn monotone(max_f: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let rows = verify_monotonicity(max_f, cfg)?;
    let ok = rows.iter().all(|r| r.holds);
    let mut r = Report::new("verify.monotone")
        .field("max_f", max_f)
        .columns(&["f", "N_f", "N_f_plus_2", "holds"]);
    for row in rows {
        r.row(vec![
            row.f.into(),
            row.n_f.into(),
            row.n_f_plus_2.into(),
            row.holds.into(),
        ]);
    }
    Ok((r.footer("all_hold", ok), ok))
}

/// Rows of `check, parameter, expected, observed, holds`.
struct Checks {
    rows: Vec<(String, String, String, String, bool)>,
}

impl Checks {
    fn new() -> Self {
        Checks { rows: Vec::new() }
    }

    fn push(
        &mut self,
        check: &str,
        param: String,
        expected: impl ToString,
        observed: impl ToString,
        holds: bool,
    ) {
        self.rows.push((
            check.to_string(),
            param,
            expected.to_string(),
            observed.to_string(),
            holds,
        ));
    }

    fn eq<T: PartialEq + ToString>(
        &mut self,
        check: &str,
        param: String,
        expected: T,
        observed: T,
    ) {
        let holds = expected == observed;
        self.push(check, param, expected, observed, holds);
    }

    fn into_report(self, schema: &'static str) -> (Report, bool) {
        let ok = self.rows.iter().all(|r| r.4);
        let failed = self.rows.iter().filter(|r| !r.4).count() as u64;
        let mut r = Report::new(schema)
            .field("checks", self.rows.len() as u64)
            .field("failed", failed)
            .columns(&["check", "parameter", "expected", "observed", "holds"]);
        for (c, p, e, o, h) in self.rows {
            r.row(vec![
                Cell::Text(c),
                Cell::Text(p),
                Cell::Text(e),
                Cell::Text(o),
                h.into(),
            ]);
        }
        (r, ok)
    }
}

fn formula_checks(max_f: u32, cfg: &EnumConfig, checks: &mut Checks) -> Result<()> {
    for f in 1..=max_f {
        let c = frobenius_census(f, cfg)?;
        let fb = fbar(f);
        if f >= 3 {
            let base = 1u64 << fb;
            checks.push(
                "sandwich",
                format!("f={f}"),
                format!("[{base}, {})", 4 * base),
                c.total,
                base <= c.total && c.total < 4 * base,
            );
            checks.eq("depth2_count", format!("f={f}"), base - 1, c.depth_count(2));
        }
        if f >= 19 {
            let partition = class_partition(f, cfg)?;
            for key in enumerate_class_keys(2)? {
                let observed = partition.get(&ClassKey::Deep(key)).map_or(0, |t| t.total);
                checks.eq(
                    "class_count",
                    format!("f={f} Y={} Z={}", key.y, key.z),
                    class_count(&key, f)?,
                    BigUint::from(observed),
                );
            }
        }
        if f <= 26 {
            checks.eq(
                "med_shift",
                format!("f={f}"),
                count_med(f, cfg)?.total,
                med_by_shift(f, cfg)?,
            );
        }
    }
    Ok(())
}

fn med_checks(max_f: u32, cfg: &EnumConfig, checks: &mut Checks) -> Result<()> {
    for f in 1..=max_f {
        let med = count_med(f, cfg)?.total;
        if let Some(&want) = MED_REFERENCE.get(f as usize - 1) {
            checks.eq("med_table", format!("f={f}"), want, med);
        }
        if f >= 9 {
            let b = med_bounds_check(f, med);
            checks.push(
                "med_lower_bound",
                format!("f={f}"),
                "2^(f-8) < MED^3",
                med,
                b.lower_ok,
            );
        }
    }
    let c = upper_bound_constant_check();
    checks.push(
        "med_constant",
        "ln gap".into(),
        "< 0",
        format!("[{:e}, {:e}]", c.log_gap_lo, c.log_gap_hi),
        c.holds && c.exponent_identity,
    );
    Ok(())
}

fn genus_checks(max_g: u32, cfg: &EnumConfig, checks: &mut Checks) -> Result<()> {
    let mut fib = FibSequence::new();
    for g in 1..=max_g {
        let c = genus_census(g, cfg)?;
        for k in 1..g {
            let got = c.by_2m_minus_f.get(&k).copied().unwrap_or(0);
            checks.eq(
                "two_m_minus_f",
                format!("g={g} k={k}"),
                fib.get((g - k) as i64),
                got,
            );
        }
        checks.eq(
            "depth2_by_genus",
            format!("g={g}"),
            fib.get(g as i64 + 1) - 1,
            c.depth2_total(),
        );
        if g <= 12 {
            let t = type_census_from(&c);
            checks.push(
                "type_bounds",
                format!("g={g}"),
                "all hold",
                t.rows.len(),
                t.all_hold(),
            );
        }
    }
    Ok(())
}

fn verify_all(budget: f64, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let deadline = Instant::now() + Duration::from_secs_f64(budget);
    let step_cfg = || -> Result<EnumConfig> {
        let left = deadline.saturating_duration_since(Instant::now());
        if left.is_zero() {
            return Err(Error::BudgetExceeded { nodes: 0 });
        }
        Ok(EnumConfig {
            max_time: Some(cfg.max_time.map_or(left, |t| t.min(left))),
            ..cfg.clone()
        })
    };
    let mut checks = Checks::new();
    for row in verify_monotonicity(31, &step_cfg()?)? {
        checks.push(
            "monotone",
            format!("f={}", row.f),
            format!("> {}", row.n_f),
            row.n_f_plus_2,
            row.holds,
        );
    }
    formula_checks(24, &step_cfg()?, &mut checks)?;
    med_checks(30, &step_cfg()?, &mut checks)?;
    genus_checks(14, &step_cfg()?, &mut checks)?;
    for (l, parity, bound) in [(5, Parity::Odd, (108, 100)), (5, Parity::Even, (106, 100))] {
        let s = constant_partial_sum(l, parity)? - BigRational::one();
        let t = BigRational::new(bound.0.into(), bound.1.into());
        checks.push(
            "partial_sum",
            format!("L={l} {parity:?}").to_lowercase(),
            format!("> {t}"),
            format!("{}/{}", s.numer(), s.denom()),
            s > t,
        );
    }
    Ok(checks.into_report("verify.all"))
}

fn med(max_f: u32, shift_max_f: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let mut ok = true;
    let mut r = Report::new("med").field("max_f", max_f).columns(&[
        "f",
        "med",
        "reference",
        "matches",
        "shift_sum",
        "lower_bound_ok",
        "log2_med_over_f",
        "upper_ratio",
    ]);
    for f in 1..=max_f {
        let c = count_med(f, cfg)?;
        let reference = MED_REFERENCE.get(f as usize - 1).copied();
        let matches = reference.map(|v| v == c.total);
        let shift = if f <= shift_max_f {
            Some(med_by_shift(f, cfg)?)
        } else {
            None
        };
        let bounds = med_bounds_check(f, c.total);
        ok &= matches.unwrap_or(true) && shift.is_none_or(|s| s == c.total);
        if f >= 9 {
            ok &= bounds.lower_ok;
        }
        r.row(vec![
            f.into(),
            c.total.into(),
            reference.into(),
            matches.into(),
            shift.into(),
            bounds.lower_ok.into(),
            growth_row(f, c.total).log2_med_over_f.into(),
            bounds.upper_ratio.into(),
        ]);
    }
    let k = upper_bound_constant_check();
    ok &= k.holds && k.exponent_identity;
    let r = r
        .footer("exponent_identity", k.exponent_identity)
        .footer("constant_inequality_holds", k.holds)
        .footer("log_gap_lo", k.log_gap_lo)
        .footer("log_gap_hi", k.log_gap_hi);
    Ok((r, ok))
}

fn genus(max_g: u32, tail_n: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let mut fib = FibSequence::new();
    let mut ok = true;
    let mut r = Report::new("genus")
        .field("max_g", max_g)
        .field("tail_n", tail_n)
        .columns(&[
            "g",
            "n_g",
            "depth2",
            "depth2_expected",
            "two_m_minus_f_laws",
            "type_bounds",
            "deep_fraction",
            "tail_mass",
        ]);
    for g in 0..=max_g {
        let c = genus_census(g, cfg)?;
        let expected = if g == 0 { 0 } else { fib.get(g as i64 + 1) - 1 };
        let laws = (1..g)
            .all(|k| c.by_2m_minus_f.get(&k).copied().unwrap_or(0) == fib.get((g - k) as i64));
        let types = type_census_from(&c).all_hold();
        ok &= laws && types && c.depth2_total() == expected;
        r.row(vec![
            g.into(),
            c.total.into(),
            c.depth2_total().into(),
            expected.into(),
            laws.into(),
            types.into(),
            deep_fraction(&c).into(),
            tail_mass_from(&c, tail_n).into(),
        ]);
    }
    Ok((r, ok))
}

fn genus_types(g: u32, cfg: &EnumConfig) -> Result<(Report, bool)> {
    let census = type_census_from(&genus_census(g, cfg)?);
    let ok = census.all_hold();
    let mut by_k: BTreeMap<u32, u64> = BTreeMap::new();
    let mut r = Report::new("genus.types").field("g", g).columns(&[
        "k",
        "A",
        "count",
        "bound_index",
        "bound",
        "holds",
    ]);
    for row in &census.rows {
        *by_k.entry(row.k).or_default() += row.count;
        r.row(vec![
            row.k.into(),
            Cell::Set(row.a.to_vec()),
            row.count.into(),
            row.bound_index.into(),
            row.bound.into(),
            row.holds.into(),
        ]);
    }
    let r = r
        .footer("types", census.rows.len() as u64)
        .footer("depth3", by_k.values().sum::<u64>())
        .footer("all_hold", ok);
    Ok((r, ok))
}
