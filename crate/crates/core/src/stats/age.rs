use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Gender};
use crate::error::{bail, Result};
use crate::stats::{chi2_normality, mean, special, welch_t_test, TestResult};

/// Ages below this are treated as data-entry errors.
pub const DEFAULT_MIN_AGE: u32 = 10;

/// Ages of one gender after filtering, with the moment-matched Gaussian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeSample {
    pub gender: Gender,
    pub values: Vec<u32>,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`).
    pub sd: f64,
    /// One-year-bin χ² fit to the Gaussian; absent when the test cannot run.
    pub normality: Option<TestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeHistogramRow {
    pub age: u32,
    pub count_male: u64,
    pub count_female: u64,
    pub fitted_male: f64,
    pub fitted_female: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeAnalysis {
    pub min_age: u32,
    pub excluded: usize,
    pub male: AgeSample,
    pub female: AgeSample,
    /// Male versus female means; absent when either sample has zero variance.
    pub welch: Option<TestResult>,
    pub histogram: Vec<AgeHistogramRow>,
}

fn sample(corpus: &Corpus, gender: Gender, min_age: u32) -> Result<(AgeSample, usize)> {
    let mut excluded = 0;
    let mut values = Vec::new();
    for d in corpus.directors.iter().filter(|d| d.gender == gender) {
        match d.age {
            Some(a) if a >= min_age => values.push(a),
            Some(_) => excluded += 1,
            None => {}
        }
    }
    if values.len() < 2 {
        bail!(InsufficientData, "{gender:?} stratum has {} usable ages, need at least 2", values.len());
    }
    let xs: Vec<f64> = values.iter().map(|&a| f64::from(a)).collect();
    let m = mean(&xs);
    let sd = libm::sqrt(crate::stats::variance(&xs));
    let normality = chi2_normality(&xs, 1.0).ok();
    Ok((
        AgeSample { gender, n: values.len(), values, mean: m, sd, normality },
        excluded,
    ))
}

fn fitted(s: &AgeSample, age: u32) -> f64 {
    if s.sd == 0.0 {
        return if f64::from(age) == s.mean { s.n as f64 } else { 0.0 };
    }
    let z = |x: f64| special::normal_cdf((x - s.mean) / s.sd);
    s.n as f64 * (z(f64::from(age) + 0.5) - z(f64::from(age) - 0.5))
}

/// Per-gender age samples with Gaussian fits, normality tests, a Welch test
/// of equal means and one-year histogram rows. Ages below `min_age` are
/// dropped; directors without gender are ignored.
pub fn age_analysis(corpus: &Corpus, min_age: u32) -> Result<AgeAnalysis> {
    let (male, ex_m) = sample(corpus, Gender::Male, min_age)?;
    let (female, ex_f) = sample(corpus, Gender::Female, min_age)?;
    let to_f64 = |s: &AgeSample| s.values.iter().map(|&a| f64::from(a)).collect::<Vec<_>>();
    let welch = welch_t_test(&to_f64(&male), &to_f64(&female)).ok();

    let lo = male.values.iter().chain(&female.values).min().copied().unwrap_or(min_age);
    let hi = male.values.iter().chain(&female.values).max().copied().unwrap_or(min_age);
    let mut counts = alloc::vec![(0u64, 0u64); (hi - lo + 1) as usize];
    for &a in &male.values {
        counts[(a - lo) as usize].0 += 1;
    }
    for &a in &female.values {
        counts[(a - lo) as usize].1 += 1;
    }
    let histogram = (lo..=hi)
        .zip(counts)
        .map(|(age, (m, f))| AgeHistogramRow {
            age,
            count_male: m,
            count_female: f,
            fitted_male: fitted(&male, age),
            fitted_female: fitted(&female, age),
        })
        .collect();
    Ok(AgeAnalysis { min_age, excluded: ex_m + ex_f, male, female, welch, histogram })
}
