//! Hypothesis tests and descriptive statistics.
//!
//! All p-values are two-sided (for χ² tests, the upper tail).

mod age;
mod descriptive;
pub mod special;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use age::{age_analysis, AgeAnalysis, AgeHistogramRow, AgeSample, DEFAULT_MIN_AGE};
pub use descriptive::{
    largest_component_test, log_centrality_tests, multi_directorship_rates, proportions_by,
    seat_vs_director_gap, sector_industry_rows, GroupKey, MultiDirectorship, ProportionRow,
    SectorIndustryRow, MULTI_THRESHOLDS, UNKNOWN,
};

use crate::error::{bail, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test_name: String,
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (divisor `n - 1`).
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TestResult> {
    for (name, s) in [("first", a), ("second", b)] {
        if s.len() < 2 {
            bail!(Degenerate, "{name} sample has {} values, need at least 2", s.len());
        }
        if variance(s) == 0.0 {
            bail!(Degenerate, "{name} sample has zero variance");
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (variance(a) / na, variance(b) / nb);
    let t = (mean(a) - mean(b)) / libm::sqrt(va + vb);
    let dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    Ok(TestResult {
        test_name: "welch_t".to_string(),
        statistic: t,
        dof,
        p_value: special::t_two_sided(t, dof),
    })
}

/// Pearson χ² test on the 2×2 table of successes and failures in two groups
/// (no continuity correction, 1 degree of freedom).
pub fn chi2_two_proportion(success_a: u64, n_a: u64, success_b: u64, n_b: u64) -> Result<TestResult> {
    if n_a == 0 || n_b == 0 {
        bail!(Parameter, "group sizes must be positive");
    }
    if success_a > n_a || success_b > n_b {
        bail!(Parameter, "successes exceed group size");
    }
    let (a, b, c, d) = (
        i128::from(success_a),
        i128::from(n_a - success_a),
        i128::from(success_b),
        i128::from(n_b - success_b),
    );
    let (succ, fail) = (a + c, b + d);
    if succ == 0 || fail == 0 {
        bail!(Degenerate, "a column of the 2x2 table is empty");
    }
    let total = (a + b + c + d) as f64;
    let cross = (a * d - b * c) as f64;
    let statistic = total * cross * cross / ((n_a as f64) * (n_b as f64) * (succ as f64) * (fail as f64));
    Ok(TestResult {
        test_name: "chi2_two_proportion".to_string(),
        statistic,
        dof: 1.0,
        p_value: special::chi2_upper(statistic, 1.0),
    })
}

/// Expected count below which adjacent bins are merged.
pub const MIN_EXPECTED: f64 = 5.0;

/// Pearson χ² goodness of fit to the moment-matched normal distribution.
///
/// Bins have width `bin_width` and are centred on multiples of it; the outer
/// bins extend to ±∞. Adjacent bins are merged left to right until each has
/// expected count ≥ 5, with a short tail folded into the last bin. The test has
/// `bins - 3` degrees of freedom (mean and standard deviation estimated).
pub fn chi2_normality(sample: &[f64], bin_width: f64) -> Result<TestResult> {
    if sample.len() < 30 {
        bail!(InsufficientData, "normality test needs at least 30 values, got {}", sample.len());
    }
    if !(bin_width > 0.0) {
        bail!(Parameter, "bin width must be positive");
    }
    let n = sample.len() as f64;
    let mu = mean(sample);
    let sd = libm::sqrt(variance(sample));
    if sd == 0.0 {
        bail!(Degenerate, "sample has zero variance");
    }
    let bin_of = |x: f64| libm::floor(x / bin_width + 0.5) as i64;
    let lo = sample.iter().map(|&x| bin_of(x)).min().unwrap();
    let hi = sample.iter().map(|&x| bin_of(x)).max().unwrap();
    let width = (hi - lo + 1) as usize;
    let mut observed = alloc::vec![0.0f64; width];
    for &x in sample {
        observed[(bin_of(x) - lo) as usize] += 1.0;
    }
    let cdf = |k: i64| special::normal_cdf(((k as f64 - 0.5) * bin_width - mu) / sd);
    let expected: Vec<f64> = (0..width as i64)
        .map(|i| {
            let k = lo + i;
            let upper = if k == hi { 1.0 } else { cdf(k + 1) };
            let lower = if k == lo { 0.0 } else { cdf(k) };
            n * (upper - lower)
        })
        .collect();

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(&expected) {
        o_acc += o;
        e_acc += e;
        if e_acc >= MIN_EXPECTED {
            merged.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += o_acc;
                last.1 += e_acc;
            }
            None => merged.push((o_acc, e_acc)),
        }
    }
    if merged.len() < 4 {
        bail!(InsufficientData, "only {} bins after merging, need at least 4", merged.len());
    }
    let statistic: f64 = merged.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (merged.len() - 3) as f64;
    Ok(TestResult {
        test_name: "chi2_normality".to_string(),
        statistic,
        dof,
        p_value: special::chi2_upper(statistic, dof),
    })
}
