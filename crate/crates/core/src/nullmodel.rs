//! Independent-seat null model.
//!
//! Every seat goes to a woman independently with probability `p`. A board of
//! size `s` then has at least one woman with probability `1 - (1-p)^s`, and
//! given a board-size distribution `f_s` the expected share of boards with a
//! woman is `Σ f_s [1 - (1-p)^s]`. Conditioning on at least one woman tilts
//! the size distribution toward large boards, giving
//! `μ_null = Σ s f_s [1-(1-p)^s] / Σ f_s [1-(1-p)^s]`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{CompanyRecord, Corpus, Gender};
use crate::error::{bail, Result};
use crate::par::{map_chunks, MAX_CHUNKS};
use crate::rng::{block_rng, stream_id, unit_f64};

/// Tolerance on `Σ f_s = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Fractions `f_s` of boards with `s` seats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, f64)>", into = "Vec<(u32, f64)>")]
pub struct BoardSizeDistribution {
    entries: Vec<(u32, f64)>,
}

impl BoardSizeDistribution {
    /// Validates sizes ≥ 1, fractions in `[0, 1]` summing to 1. Repeated sizes
    /// are not allowed; entries are sorted by size.
    pub fn new(mut entries: Vec<(u32, f64)>) -> Result<Self> {
        if entries.is_empty() {
            bail!(Distribution, "no board sizes");
        }
        entries.sort_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            bail!(Distribution, "repeated board size");
        }
        if entries[0].0 == 0 {
            bail!(Distribution, "board size 0");
        }
        if let Some(&(s, f)) = entries.iter().find(|e| !(0.0..=1.0).contains(&e.1)) {
            bail!(Distribution, "f_{s} = {f} outside [0, 1]");
        }
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            bail!(Distribution, "fractions sum to {total}");
        }
        Ok(BoardSizeDistribution { entries })
    }

    /// Empirical distribution of board-size counts.
    pub fn from_counts(counts: &BTreeMap<u32, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            bail!(Distribution, "no boards");
        }
        Self::new(
            counts
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|(&s, &c)| (s, c as f64 / total as f64))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&(s, f)| f64::from(s) * f).sum()
    }

    pub fn min_size(&self) -> u32 {
        self.entries[0].0
    }

    pub fn max_size(&self) -> u32 {
        self.entries[self.entries.len() - 1].0
    }
}

impl TryFrom<Vec<(u32, f64)>> for BoardSizeDistribution {
    type Error = crate::Error;

    fn try_from(entries: Vec<(u32, f64)>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<BoardSizeDistribution> for Vec<(u32, f64)> {
    fn from(d: BoardSizeDistribution) -> Self {
        d.entries
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        bail!(Parameter, "p = {p} outside [0, 1]");
    }
    Ok(())
}

/// `1 - (1-p)^s`.
pub fn prob_at_least_one(p: f64, s: u32) -> Result<f64> {
    check_p(p)?;
    if s == 0 {
        bail!(Parameter, "board size must be positive");
    }
    Ok(at_least_one(p, s))
}

fn at_least_one(p: f64, s: u32) -> f64 {
    -libm::expm1(f64::from(s) * libm::log1p(-p))
}

/// `(1-p)^t - (1-p)^s` for `t < s`, without cancellation at small `p`.
fn none_gap(p: f64, t: u32, s: u32) -> f64 {
    let lq = libm::log1p(-p);
    (libm::exp(f64::from(t) * lq) * -libm::expm1(f64::from(s - t) * lq)).max(0.0)
}

/// `Σ_s f_s [1 - (1-p)^s]`.
pub fn expected_fraction_with_women(f: &BoardSizeDistribution, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(f.entries.iter().map(|&(s, fs)| fs * at_least_one(p, s)).sum())
}

/// Mean board size conditioned on at least one woman.
///
/// Written as the unconditional mean plus
/// `Σ_{t<s} f_s f_t (s-t) [(1-p)^t - (1-p)^s] / P(woman)`, a sum of
/// nonnegative terms, so the result never falls below the mean.
pub fn mu_null(f: &BoardSizeDistribution, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        bail!(Parameter, "mu_null is undefined for p = 0");
    }
    let den = expected_fraction_with_women(f, p)?;
    let mut num = 0.0;
    for (i, &(s, fs)) in f.entries.iter().enumerate() {
        for &(t, ft) in &f.entries[..i] {
            num += fs * ft * f64::from(s - t) * none_gap(p, t, s);
        }
    }
    Ok(f.mean() + num / den)
}

/// Which companies a statistic covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", from = "String")]
pub enum Scope {
    Global,
    Country(String),
}

impl Scope {
    pub fn label(&self) -> &str {
        match self {
            Scope::Global => "global",
            Scope::Country(c) => c,
        }
    }

    pub fn contains(&self, company: &CompanyRecord) -> bool {
        match self {
            Scope::Global => true,
            Scope::Country(c) => company.country.as_deref() == Some(c.as_str()),
        }
    }
}

impl From<Scope> for String {
    fn from(s: Scope) -> String {
        s.label().to_string()
    }
}

impl From<String> for Scope {
    fn from(s: String) -> Scope {
        if s == "global" {
            Scope::Global
        } else {
            Scope::Country(s)
        }
    }
}

/// Denominator of the female-seat fraction `p`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeatDenominator {
    /// Every seat, including seats of directors without a recorded gender.
    #[default]
    AllSeats,
    /// Only seats of directors with a recorded gender.
    GenderedOnly,
}

/// Empirical board statistics for one scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoardStats {
    /// Boards with at least one listed director.
    pub n_boards: usize,
    pub boards_with_women: usize,
    pub fraction_with_women: f64,
    pub mean_size: f64,
    pub mean_size_with_women: Option<f64>,
    pub mean_size_without_women: Option<f64>,
    pub size_counts: BTreeMap<u32, u64>,
    pub distribution: BoardSizeDistribution,
    pub female_seats: u64,
    pub denominator_seats: u64,
    pub p: f64,
}

pub fn observed_board_stats(corpus: &Corpus, scope: &Scope, denominator: SeatDenominator) -> Result<BoardStats> {
    let (mut n_boards, mut with_women) = (0usize, 0usize);
    let (mut sum_all, mut sum_with, mut sum_without) = (0u64, 0u64, 0u64);
    let (mut female_seats, mut gendered_seats, mut all_seats) = (0u64, 0u64, 0u64);
    let mut size_counts: BTreeMap<u32, u64> = BTreeMap::new();
    for company in corpus.companies.iter().filter(|c| scope.contains(c) && !c.board.is_empty()) {
        let size = company.board.len() as u64;
        let women = company.board.iter().filter(|&&d| corpus.gender_of(d) == Gender::Female).count() as u64;
        let gendered = company.board.iter().filter(|&&d| corpus.gender_of(d).is_known()).count() as u64;
        n_boards += 1;
        sum_all += size;
        all_seats += size;
        female_seats += women;
        gendered_seats += gendered;
        *size_counts.entry(size as u32).or_default() += 1;
        if women > 0 {
            with_women += 1;
            sum_with += size;
        } else {
            sum_without += size;
        }
    }
    if n_boards == 0 {
        bail!(InsufficientData, "scope `{}` has no boards with listed directors", scope.label());
    }
    let denominator_seats = match denominator {
        SeatDenominator::AllSeats => all_seats,
        SeatDenominator::GenderedOnly => gendered_seats,
    };
    if denominator_seats == 0 {
        bail!(InsufficientData, "scope `{}` has no gendered seats", scope.label());
    }
    let without = n_boards - with_women;
    Ok(BoardStats {
        n_boards,
        boards_with_women: with_women,
        fraction_with_women: with_women as f64 / n_boards as f64,
        mean_size: sum_all as f64 / n_boards as f64,
        mean_size_with_women: (with_women > 0).then(|| sum_with as f64 / with_women as f64),
        mean_size_without_women: (without > 0).then(|| sum_without as f64 / without as f64),
        distribution: BoardSizeDistribution::from_counts(&size_counts)?,
        size_counts,
        female_seats,
        denominator_seats,
        p: female_seats as f64 / denominator_seats as f64,
    })
}

/// Monte Carlo estimates with their standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simulation {
    pub trials: u64,
    pub seed: u64,
    pub fraction_with_women: f64,
    pub fraction_se: f64,
    /// Mean size of simulated boards with a woman; `None` if there were none.
    pub mu: Option<f64>,
    pub mu_se: Option<f64>,
}

const TRIALS_PER_BLOCK: u64 = 1 << 16;

#[derive(Default, Clone, Copy)]
struct Tally {
    with_women: u64,
    size_sum: u64,
    size_sq_sum: u64,
}

/// Simulates `trials` boards: draw a size from `f`, then flip a `p`-coin per
/// seat until the first woman or the end of the board. Deterministic in
/// `(seed, stream)` and independent of thread count.
pub fn monte_carlo_null_stream(
    f: &BoardSizeDistribution,
    p: f64,
    trials: u64,
    seed: u64,
    stream: u64,
) -> Result<Simulation> {
    check_p(p)?;
    if trials == 0 {
        bail!(Parameter, "at least one trial is required");
    }
    let sizes: Vec<u32> = f.entries.iter().map(|e| e.0).collect();
    let mut cdf: Vec<f64> = Vec::with_capacity(sizes.len());
    let mut acc = 0.0;
    for &(_, fs) in &f.entries {
        acc += fs;
        cdf.push(acc);
    }
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    let tallies = map_chunks(blocks as usize, MAX_CHUNKS, |range| {
        let mut t = Tally::default();
        for block in range {
            let block = block as u64;
            let mut rng = block_rng(seed, stream, block);
            let count = TRIALS_PER_BLOCK.min(trials - block * TRIALS_PER_BLOCK);
            for _ in 0..count {
                let u = unit_f64(&mut rng);
                let idx = cdf.partition_point(|&c| c <= u).min(sizes.len() - 1);
                let s = sizes[idx];
                if (0..s).any(|_| unit_f64(&mut rng) < p) {
                    t.with_women += 1;
                    t.size_sum += u64::from(s);
                    t.size_sq_sum += u64::from(s) * u64::from(s);
                }
            }
        }
        t
    });
    let total = tallies.iter().fold(Tally::default(), |a, t| Tally {
        with_women: a.with_women + t.with_women,
        size_sum: a.size_sum + t.size_sum,
        size_sq_sum: a.size_sq_sum + t.size_sq_sum,
    });
    let n = trials as f64;
    let q = total.with_women as f64 / n;
    let w = total.with_women as f64;
    let (mu, mu_se) = if total.with_women == 0 {
        (None, None)
    } else {
        let mean = total.size_sum as f64 / w;
        let se = if total.with_women > 1 {
            let var = (total.size_sq_sum as f64 - w * mean * mean) / (w - 1.0);
            libm::sqrt(var.max(0.0) / w)
        } else {
            0.0
        };
        (Some(mean), Some(se))
    };
    Ok(Simulation {
        trials,
        seed,
        fraction_with_women: q,
        fraction_se: libm::sqrt(q * (1.0 - q) / n),
        mu,
        mu_se,
    })
}

pub fn monte_carlo_null(f: &BoardSizeDistribution, p: f64, trials: u64, seed: u64) -> Result<Simulation> {
    monte_carlo_null_stream(f, p, trials, seed, 0)
}

/// Predicted versus observed boards with women, for one scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullModelResult {
    pub scope: Scope,
    pub n_boards: usize,
    pub p: f64,
    pub predicted_fraction_with_women: f64,
    pub observed_fraction_with_women: f64,
    pub mu_null: Option<f64>,
    pub observed_conditional_mean: Option<f64>,
    pub mean_size: f64,
    pub mean_size_without_women: Option<f64>,
    pub board_size_distribution: BoardSizeDistribution,
    pub simulated: Option<Simulation>,
}

impl NullModelResult {
    /// Predicted minus observed fraction of boards with women.
    pub fn excess(&self) -> f64 {
        self.predicted_fraction_with_women - self.observed_fraction_with_women
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullModelOptions {
    pub denominator: SeatDenominator,
    pub by_country: bool,
    /// `(trials, seed)` for the Monte Carlo cross-check.
    pub monte_carlo: Option<(u64, u64)>,
}

pub fn null_model_for_scope(corpus: &Corpus, scope: Scope, opts: &NullModelOptions) -> Result<NullModelResult> {
    let stats = observed_board_stats(corpus, &scope, opts.denominator)?;
    let f = stats.distribution;
    let simulated = match opts.monte_carlo {
        Some((trials, seed)) => Some(monte_carlo_null_stream(&f, stats.p, trials, seed, stream_id(scope.label()))?),
        None => None,
    };
    Ok(NullModelResult {
        predicted_fraction_with_women: expected_fraction_with_women(&f, stats.p)?,
        mu_null: (stats.p > 0.0).then(|| mu_null(&f, stats.p)).transpose()?,
        scope,
        n_boards: stats.n_boards,
        p: stats.p,
        observed_fraction_with_women: stats.fraction_with_women,
        observed_conditional_mean: stats.mean_size_with_women,
        mean_size: stats.mean_size,
        mean_size_without_women: stats.mean_size_without_women,
        board_size_distribution: f,
        simulated,
    })
}

/// Global row first, then one row per country (if requested) ordered by
/// observed fraction descending, ties by country code. Countries without any
/// non-empty board, or without gendered seats under the chosen denominator,
/// are skipped.
pub fn country_null_report(corpus: &Corpus, opts: &NullModelOptions) -> Result<Vec<NullModelResult>> {
    let mut out = alloc::vec![null_model_for_scope(corpus, Scope::Global, opts)?];
    if opts.by_country {
        let mut rows = Vec::new();
        for country in corpus.countries() {
            match null_model_for_scope(corpus, Scope::Country(country.to_string()), opts) {
                Ok(r) => rows.push(r),
                Err(crate::Error::InsufficientData(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        rows.sort_by(|a, b| {
            b.observed_fraction_with_women
                .total_cmp(&a.observed_fraction_with_women)
                .then_with(|| a.scope.cmp(&b.scope))
        });
        out.extend(rows);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CompanyRow, RawDirectorRow};
    use alloc::format;
    use alloc::vec;

    fn dist(e: &[(u32, f64)]) -> BoardSizeDistribution {
        BoardSizeDistribution::new(e.to_vec()).unwrap()
    }

    #[test]
    fn prob_examples() {
        assert_eq!(prob_at_least_one(0.0, 7).unwrap(), 0.0);
        assert_eq!(prob_at_least_one(1.0, 3).unwrap(), 1.0);
        assert_eq!(prob_at_least_one(0.5, 2).unwrap(), 0.75);
        assert!(prob_at_least_one(1.5, 2).is_err());
        assert!(prob_at_least_one(-0.1, 2).is_err());
    }

    #[test]
    fn expected_fraction_examples() {
        let f = dist(&[(3, 0.2), (10, 0.8)]);
        assert_eq!(expected_fraction_with_women(&f, 0.0).unwrap(), 0.0);
        assert_eq!(expected_fraction_with_women(&dist(&[(2, 1.0)]), 0.5).unwrap(), 0.75);
    }

    #[test]
    fn distribution_validation() {
        assert!(BoardSizeDistribution::new(vec![]).is_err());
        assert!(BoardSizeDistribution::new(vec![(0, 1.0)]).is_err());
        assert!(BoardSizeDistribution::new(vec![(1, 0.5), (2, 0.4)]).is_err());
        assert!(BoardSizeDistribution::new(vec![(1, 0.5), (1, 0.5)]).is_err());
        assert!(BoardSizeDistribution::new(vec![(1, 1.5), (2, -0.5)]).is_err());
        assert_eq!(dist(&[(5, 0.5), (1, 0.5)]).entries()[0].0, 1);
    }

    #[test]
    fn mu_null_examples() {
        assert_eq!(mu_null(&dist(&[(7, 1.0)]), 0.3).unwrap(), 7.0);
        let mu = mu_null(&dist(&[(1, 0.5), (3, 0.5)]), 0.5).unwrap();
        assert!((mu - 1.5625 / 0.6875).abs() < 1e-15);
        assert!(mu_null(&dist(&[(1, 1.0)]), 0.0).is_err());
    }

    fn corpus(boards: &[(&str, Option<&str>, &[(&str, Gender)])]) -> Corpus {
        let companies = boards
            .iter()
            .map(|(id, country, _)| match country {
                Some(c) => CompanyRow::new(id).with_country(c),
                None => CompanyRow::new(id),
            })
            .collect();
        let rows = boards
            .iter()
            .flat_map(|(id, _, members)| members.iter().map(move |(n, g)| RawDirectorRow::new(id, n, *g, None)))
            .collect();
        Corpus::build(companies, rows).unwrap().corpus
    }

    #[test]
    fn observed_single_mixed_board() {
        let c = corpus(&[("C1", None, &[("a", Gender::Male), ("b", Gender::Female)])]);
        let s = observed_board_stats(&c, &Scope::Global, SeatDenominator::AllSeats).unwrap();
        assert_eq!(s.fraction_with_women, 1.0);
        assert_eq!(s.mean_size, 2.0);
        assert_eq!(s.mean_size_with_women, Some(2.0));
        assert_eq!(s.mean_size_without_women, None);
    }

    #[test]
    fn observed_two_boards_and_denominators() {
        let c = corpus(&[
            ("C1", None, &[("a", Gender::Male), ("b", Gender::Male)]),
            ("C2", None, &[("c", Gender::Female)]),
            ("C3", None, &[]),
            ("C4", None, &[("d", Gender::Missing)]),
        ]);
        let s = observed_board_stats(&c, &Scope::Global, SeatDenominator::AllSeats).unwrap();
        assert_eq!(s.n_boards, 3);
        assert_eq!(s.p, 0.25);
        let s = observed_board_stats(&c, &Scope::Global, SeatDenominator::GenderedOnly).unwrap();
        assert_eq!(s.p, 1.0 / 3.0);
        assert!(observed_board_stats(&c, &Scope::Country("SG".into()), SeatDenominator::AllSeats).is_err());

        let c = corpus(&[
            ("C1", None, &[("a", Gender::Male), ("b", Gender::Male)]),
            ("C2", None, &[("c", Gender::Female)]),
        ]);
        let s = observed_board_stats(&c, &Scope::Global, SeatDenominator::AllSeats).unwrap();
        assert_eq!(s.fraction_with_women, 0.5);
        assert_eq!(s.p, 1.0 / 3.0);
    }

    #[test]
    fn monte_carlo_edge_cases() {
        let f = dist(&[(2, 0.5), (9, 0.5)]);
        let sim = monte_carlo_null(&f, 1.0, 1000, 3).unwrap();
        assert_eq!(sim.fraction_with_women, 1.0);
        let sim = monte_carlo_null(&f, 0.0, 1000, 3).unwrap();
        assert_eq!(sim.fraction_with_women, 0.0);
        assert_eq!(sim.mu, None);
        assert!(monte_carlo_null(&f, 0.5, 0, 3).is_err());
        assert_eq!(monte_carlo_null(&f, 0.2, 200_000, 11), monte_carlo_null(&f, 0.2, 200_000, 11));
        assert_ne!(monte_carlo_null(&f, 0.2, 200_000, 11), monte_carlo_null(&f, 0.2, 200_000, 12));
    }

    #[test]
    fn monte_carlo_two_seat_boards() {
        let f = dist(&[(2, 1.0)]);
        let trials = 1_000_000;
        let sim = monte_carlo_null(&f, 0.5, trials, 2024).unwrap();
        let se = libm::sqrt(0.1875 / trials as f64);
        assert!((sim.fraction_with_women - 0.75).abs() < 3.0 * se, "{sim:?}");
        assert_eq!(sim.mu, Some(2.0));
    }

    #[test]
    fn single_country_report() {
        let c = corpus(&[
            ("C1", Some("SG"), &[("a", Gender::Male), ("b", Gender::Female)]),
            ("C2", Some("SG"), &[("c", Gender::Male)]),
        ]);
        let opts = NullModelOptions { by_country: true, ..Default::default() };
        let rows = country_null_report(&c, &opts).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].scope, Scope::Global);
        assert_eq!(rows[1].scope, Scope::Country("SG".into()));
        let strip = |r: &NullModelResult| NullModelResult { scope: Scope::Global, ..r.clone() };
        assert_eq!(strip(&rows[0]), strip(&rows[1]));
        assert_eq!(format!("{}", rows[1].scope.label()), "SG");
    }
}
