//! Distribution of `n(S) = |S ∩ [1, f]|` (equivalently genus `f - n`) among
//! the semigroups with Frobenius number `f`, and its Gaussian-times-
//! polynomial approximation.
//!
//! The approximation is `(1/c) ψ_f(n) h_L(n / fbar)` where `ψ_f` is the
//! normal density with mean `fbar/2` and variance `fbar/4`, and
//!
//! ```text
//! h_L(x) = 1 + Σ_{Max(Y) <= L} (1 - x)^beta x^(Max(Y) + 1 + alpha - beta)
//! ```
//!
//! The normalizer `c` is the partial sum [`constant_partial_sum`] over the
//! same keys, not the limiting constant, so the density sums to about 1
//! over `n ∈ [0, fbar]`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use statrs::distribution::{Continuous, Normal};

use crate::classify::{
    class_count_by_n, class_partition, constant_partial_sum, enumerate_class_keys, ClassKey, Parity,
};
use crate::enumerate::{frobenius_census, EnumConfig, FrobeniusCensus};
use crate::error::{Error, Result};
use crate::util::{binomial, fbar};

/// Exact `n ↦ N(f, n)` for `0 <= n <= fbar`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistributionTable {
    pub f: u32,
    pub counts: BTreeMap<u32, u64>,
    pub total: u64,
}

impl DistributionTable {
    pub fn from_census(c: &FrobeniusCensus) -> Self {
        let counts = (0..=fbar(c.f))
            .map(|n| (n, c.by_n.get(&n).copied().unwrap_or(0)))
            .collect();
        DistributionTable {
            f: c.f,
            counts,
            total: c.total,
        }
    }

    pub fn count(&self, n: u32) -> u64 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    pub fn probability(&self, n: u32) -> f64 {
        self.count(n) as f64 / self.total as f64
    }

    /// Exact mean of `n(S)`.
    pub fn mean_n(&self) -> BigRational {
        let weighted: u64 = self.counts.iter().map(|(&n, &c)| n as u64 * c).sum();
        BigRational::new(weighted.into(), self.total.into())
    }
}

pub fn empirical_distribution(f: u32, cfg: &EnumConfig) -> Result<DistributionTable> {
    Ok(DistributionTable::from_census(&frobenius_census(f, cfg)?))
}

/// Exact mean of `n(S)` over semigroups with Frobenius number `f`; the
/// mean genus is `f` minus this.
pub fn average_n(f: u32, cfg: &EnumConfig) -> Result<BigRational> {
    Ok(empirical_distribution(f, cfg)?.mean_n())
}

/// Fraction of semigroups with `|n(S) - f/4| < f^(1/2 + eps)`.
pub fn concentration_mass_from(table: &DistributionTable, eps: f64) -> f64 {
    let f = table.f as f64;
    let radius = f.powf(0.5 + eps);
    let inside: u64 = table
        .counts
        .iter()
        .filter(|(&n, _)| (n as f64 - f / 4.0).abs() < radius)
        .map(|(_, &c)| c)
        .sum();
    inside as f64 / table.total as f64
}

pub fn concentration_mass(f: u32, eps: f64, cfg: &EnumConfig) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(concentration_mass_from(
        &empirical_distribution(f, cfg)?,
        eps,
    ))
}

/// Polynomial with exact rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HPolynomial {
    pub l: u32,
    pub parity: Parity,
    #[serde(serialize_with = "serialize_rationals")]
    pub coefficients: Vec<BigRational>,
}

fn serialize_rationals<S: serde::Serializer>(
    xs: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

impl HPolynomial {
    fn from_integers(l: u32, parity: Parity, mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        HPolynomial {
            l,
            parity,
            coefficients: coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Integer coefficients, e.g. `[1, 0, 2, -1]` for `1 + 2x² - x³`.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        self.coefficients.iter().map(|c| c.to_integer()).collect()
    }
}

impl std::fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let one = mag == BigRational::from_integer(1.into());
            match (i, one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Expands `h_L` from the class definitions.
pub fn h_polynomial(max_l: u32, parity: Parity) -> Result<HPolynomial> {
    let keys = enumerate_class_keys(max_l)?;
    let degree = keys
        .iter()
        .map(|k| k.max_y() + 1 + k.alpha_for(parity))
        .max()
        .unwrap_or(0);
    let mut coeffs = vec![0i64; degree.max(2) as usize + 1];
    coeffs[0] = 1;
    for key in &keys {
        let beta = key.beta() as i64;
        let shift = (key.max_y() + 1 + key.alpha_for(parity)) as i64 - beta;
        // (1 - x)^beta = Σ_j C(beta, j) (-1)^j x^j
        let mut c = 1i64;
        for j in 0..=beta {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            coeffs[(shift + j) as usize] += sign * c;
            c = c * (beta - j) / (j + 1);
        }
    }
    Ok(HPolynomial::from_integers(max_l, parity, coeffs))
}

/// The `L = 2` polynomial `1 + 2x² - x³ + 4x⁴ - 2x⁵ + 2x⁶` as quoted in the
/// literature, kept for comparison against [`h_polynomial`].
pub fn quoted_h2() -> HPolynomial {
    HPolynomial::from_integers(2, Parity::Odd, vec![1, 0, 2, -1, 4, -2, 2])
}

/// `(1/c) ψ_f(n) h(n / fbar)` for one Frobenius number.
#[derive(Clone, Debug)]
pub struct DensityModel {
    pub f: u32,
    pub l: u32,
    pub h: HPolynomial,
    pub normalizer: BigRational,
    gaussian: Normal,
}

impl DensityModel {
    /// Model built from the class definitions; needs `f > 6L + 6`.
    pub fn new(f: u32, max_l: u32) -> Result<Self> {
        let parity = Parity::of(f);
        Self::with_polynomial(f, h_polynomial(max_l, parity)?)
    }

    /// Model using an arbitrary `h` with the normalizer for `h.l`.
    pub fn with_polynomial(f: u32, h: HPolynomial) -> Result<Self> {
        if f <= 6 * h.l + 6 {
            return Err(Error::FTooSmall { f, max_y: h.l });
        }
        let fb = fbar(f) as f64;
        let gaussian = Normal::new(fb / 2.0, (fb / 4.0).sqrt())
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(DensityModel {
            f,
            l: h.l,
            normalizer: constant_partial_sum(h.l, Parity::of(f))?,
            h,
            gaussian,
        })
    }

    pub fn density(&self, n: u32) -> f64 {
        let fb = fbar(self.f) as f64;
        let c = self.normalizer.to_f64().unwrap_or(f64::NAN);
        self.gaussian.pdf(n as f64) * self.h.evaluate_f64(n as f64 / fb) / c
    }

    /// Σ density over `n ∈ [0, fbar]`.
    pub fn total_mass(&self) -> f64 {
        (0..=fbar(self.f)).map(|n| self.density(n)).sum()
    }
}

pub fn theoretical_density(f: u32, max_l: u32, n: u32) -> Result<f64> {
    if n > fbar(f) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds fbar = {}",
            fbar(f)
        )));
    }
    Ok(DensityModel::new(f, max_l)?.density(n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub count: u64,
    pub empirical_prob: f64,
    pub theory_density: f64,
    pub abs_diff: f64,
}

/// Empirical distribution against a density model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub f: u32,
    pub l: u32,
    pub rows: Vec<ComparisonRow>,
    pub sup_diff: f64,
    /// `(1/2) Σ |empirical - theory|`.
    pub tv_distance: f64,
}

pub fn compare(table: &DistributionTable, model: &DensityModel) -> Comparison {
    let rows: Vec<ComparisonRow> = table
        .counts
        .iter()
        .map(|(&n, &count)| {
            let empirical_prob = table.probability(n);
            let theory_density = model.density(n);
            ComparisonRow {
                n,
                count,
                empirical_prob,
                theory_density,
                abs_diff: (empirical_prob - theory_density).abs(),
            }
        })
        .collect();
    let sup_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let tv_distance = rows.iter().map(|r| r.abs_diff).sum::<f64>() / 2.0;
    Comparison {
        f: table.f,
        l: model.l,
        rows,
        sup_diff,
        tv_distance,
    }
}

/// The largest `L` with `f > 6L + 6`, if any.
pub fn natural_l(f: u32) -> Option<u32> {
    (f >= 7).then(|| (f - 7) / 6)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionRow {
    pub n: u32,
    pub enumerated: u64,
    /// Depth <= 2 contribution `C(fbar, n)`.
    pub shallow: String,
    /// Closed-form contribution of classes with `Max(Y) <= L`.
    pub formula: String,
    /// Enumerated contribution of classes with `Max(Y) > L`.
    pub residual: u64,
    pub holds: bool,
}

/// Rebuilds `N(f, n)` from `C(fbar, n)` (depth <= 2), the closed-form
/// class counts for `Max(Y) <= L`, and the enumerated counts of the
/// remaining classes, and compares with direct enumeration.
pub fn structured_reconstruction(
    f: u32,
    max_l: u32,
    cfg: &EnumConfig,
) -> Result<Vec<ReconstructionRow>> {
    if f <= 6 * max_l + 6 {
        return Err(Error::FTooSmall { f, max_y: max_l });
    }
    let fb = fbar(f);
    let table = empirical_distribution(f, cfg)?;
    let partition = class_partition(f, cfg)?;
    let keys = enumerate_class_keys(max_l)?;
    let mut residual: BTreeMap<u32, u64> = BTreeMap::new();
    for (key, tally) in &partition {
        if let ClassKey::Deep(yz) = key {
            if yz.max_y() > max_l {
                for (&n, &c) in &tally.by_n {
                    *residual.entry(n).or_default() += c;
                }
            }
        }
    }
    (0..=fb)
        .map(|n| {
            let shallow = binomial(fb as i64, n as i64);
            let mut formula = BigUint::zero();
            for key in &keys {
                formula += class_count_by_n(key, f, n)?;
            }
            let res = residual.get(&n).copied().unwrap_or(0);
            let enumerated = table.count(n);
            let predicted = &shallow + &formula + BigUint::from(res);
            Ok(ReconstructionRow {
                n,
                enumerated,
                shallow: shallow.to_string(),
                formula: formula.to_string(),
                residual: res,
                holds: predicted == BigUint::from(enumerated),
            })
        })
        .collect()
}
