use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{modal_attribute, CompanyRecord, Corpus, Gender};
use crate::error::{bail, Result};
use crate::metrics::NodeMetrics;
use crate::nullmodel::Scope;
use crate::stats::{chi2_two_proportion, welch_t_test, TestResult};

/// Label for companies or directors without the grouping attribute.
pub const UNKNOWN: &str = "unknown";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKey {
    Country,
    Sector,
    Industry,
}

impl GroupKey {
    fn of(self, c: &CompanyRecord) -> Option<&str> {
        match self {
            GroupKey::Country => c.country.as_deref(),
            GroupKey::Sector => c.sector.as_deref(),
            GroupKey::Industry => c.industry.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionRow {
    pub key: String,
    pub n_seats: u64,
    pub female_seats: u64,
    pub male_seats: u64,
    pub seat_proportion: f64,
    /// Directors whose modal group is this key.
    pub n_directors: u64,
    pub female_directors: u64,
    pub director_proportion: Option<f64>,
}

#[derive(Default)]
struct Counts {
    seats: u64,
    female_seats: u64,
    male_seats: u64,
    directors: u64,
    female_directors: u64,
}

/// Female share of seats and of directors per group, sorted by seat
/// proportion descending (ties by key). Seats count every listed director;
/// directors are assigned to the most common group among their companies.
pub fn proportions_by(corpus: &Corpus, key: GroupKey) -> Vec<ProportionRow> {
    let mut groups: BTreeMap<&str, Counts> = BTreeMap::new();
    for c in &corpus.companies {
        if c.board.is_empty() {
            continue;
        }
        let g = groups.entry(key.of(c).unwrap_or(UNKNOWN)).or_default();
        for &d in &c.board {
            g.seats += 1;
            match corpus.gender_of(d) {
                Gender::Female => g.female_seats += 1,
                Gender::Male => g.male_seats += 1,
                Gender::Missing => {}
            }
        }
    }
    for d in &corpus.directors {
        let k = modal_attribute(&d.seats, &corpus.companies, |c| key.of(c)).unwrap_or(UNKNOWN);
        let g = groups.entry(k).or_default();
        g.directors += 1;
        g.female_directors += u64::from(d.gender == Gender::Female);
    }
    let mut rows: Vec<ProportionRow> = groups
        .into_iter()
        .map(|(k, g)| ProportionRow {
            key: k.to_string(),
            n_seats: g.seats,
            female_seats: g.female_seats,
            male_seats: g.male_seats,
            seat_proportion: if g.seats == 0 { 0.0 } else { g.female_seats as f64 / g.seats as f64 },
            n_directors: g.directors,
            female_directors: g.female_directors,
            director_proportion: (g.directors > 0).then(|| g.female_directors as f64 / g.directors as f64),
        })
        .collect();
    rows.sort_by(|a, b| b.seat_proportion.total_cmp(&a.seat_proportion).then_with(|| a.key.cmp(&b.key)));
    rows
}

/// A sector row (`industry == None`) followed by its industries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorIndustryRow {
    pub sector: String,
    pub industry: Option<String>,
    pub n_seats: u64,
    pub female_seats: u64,
    pub proportion: f64,
}

/// Sectors by female seat share descending, each followed by its industries
/// in descending order.
pub fn sector_industry_rows(corpus: &Corpus) -> Vec<SectorIndustryRow> {
    let mut sectors: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    let mut industries: BTreeMap<(&str, &str), (u64, u64)> = BTreeMap::new();
    for c in corpus.companies.iter().filter(|c| !c.board.is_empty()) {
        let seats = c.board.len() as u64;
        let women = c.board.iter().filter(|&&d| corpus.gender_of(d) == Gender::Female).count() as u64;
        let sector = c.sector.as_deref().unwrap_or(UNKNOWN);
        let s = sectors.entry(sector).or_default();
        s.0 += seats;
        s.1 += women;
        let i = industries.entry((sector, c.industry.as_deref().unwrap_or(UNKNOWN))).or_default();
        i.0 += seats;
        i.1 += women;
    }
    let row = |sector: &str, industry: Option<&str>, (seats, women): (u64, u64)| SectorIndustryRow {
        sector: sector.to_string(),
        industry: industry.map(str::to_string),
        n_seats: seats,
        female_seats: women,
        proportion: women as f64 / seats as f64,
    };
    let by_share = |a: &SectorIndustryRow, b: &SectorIndustryRow| {
        b.proportion
            .total_cmp(&a.proportion)
            .then_with(|| a.sector.cmp(&b.sector))
            .then_with(|| a.industry.cmp(&b.industry))
    };
    let mut top: Vec<SectorIndustryRow> = sectors.iter().map(|(&s, &c)| row(s, None, c)).collect();
    top.sort_by(by_share);
    let mut out = Vec::new();
    for sector_row in top {
        let mut subs: Vec<SectorIndustryRow> = industries
            .iter()
            .filter(|((s, _), _)| *s == sector_row.sector)
            .map(|(&(s, i), &c)| row(s, Some(i), c))
            .collect();
        subs.sort_by(by_share);
        out.push(sector_row);
        out.extend(subs);
    }
    out
}

/// `|female seats / seats − female directors / directors|` within a scope.
/// For a country, seats are those of its companies and directors are those
/// whose inferred country it is.
pub fn seat_vs_director_gap(corpus: &Corpus, scope: &Scope) -> Result<f64> {
    let (mut seats, mut female_seats) = (0u64, 0u64);
    for c in corpus.companies.iter().filter(|c| scope.contains(c)) {
        seats += c.board.len() as u64;
        female_seats += c.board.iter().filter(|&&d| corpus.gender_of(d) == Gender::Female).count() as u64;
    }
    let (mut directors, mut female_directors) = (0u64, 0u64);
    for d in &corpus.directors {
        let inside = match scope {
            Scope::Global => true,
            Scope::Country(c) => d.inferred_country.as_deref() == Some(c.as_str()),
        };
        if inside {
            directors += 1;
            female_directors += u64::from(d.gender == Gender::Female);
        }
    }
    if seats == 0 || directors == 0 {
        bail!(InsufficientData, "scope `{}` has no seats or no directors", scope.label());
    }
    Ok((female_seats as f64 / seats as f64 - female_directors as f64 / directors as f64).abs())
}

/// Seat-count thresholds: rates are for directors with more than `t` seats.
pub const MULTI_THRESHOLDS: [u32; 4] = [1, 2, 3, 5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiDirectorship {
    pub thresholds: Vec<u32>,
    pub all: Vec<f64>,
    pub male: Option<Vec<f64>>,
    pub female: Option<Vec<f64>>,
}

pub fn multi_directorship_rates(corpus: &Corpus) -> MultiDirectorship {
    let rates = |g: Option<Gender>| -> Option<Vec<f64>> {
        let seats: Vec<usize> = corpus
            .directors
            .iter()
            .filter(|d| g.is_none_or(|g| d.gender == g))
            .map(|d| d.seats.len())
            .collect();
        (!seats.is_empty()).then(|| {
            MULTI_THRESHOLDS
                .iter()
                .map(|&t| seats.iter().filter(|&&s| s > t as usize).count() as f64 / seats.len() as f64)
                .collect()
        })
    };
    MultiDirectorship {
        thresholds: MULTI_THRESHOLDS.to_vec(),
        all: rates(None).unwrap_or_else(|| alloc::vec![0.0; MULTI_THRESHOLDS.len()]),
        male: rates(Some(Gender::Male)),
        female: rates(Some(Gender::Female)),
    }
}

/// Welch tests, male versus female, on log degree and log betweenness of
/// nodes in the largest component with a positive value.
pub fn log_centrality_tests(nodes: &[NodeMetrics]) -> Result<(TestResult, TestResult)> {
    let sample = |g: Gender, f: fn(&NodeMetrics) -> f64| -> Vec<f64> {
        nodes
            .iter()
            .filter(|m| m.in_largest && m.gender == g)
            .map(f)
            .filter(|&v| v > 0.0)
            .map(libm::log)
            .collect()
    };
    let run = |name: &str, f: fn(&NodeMetrics) -> f64| -> Result<TestResult> {
        let (male, female) = (sample(Gender::Male, f), sample(Gender::Female, f));
        if male.is_empty() || female.is_empty() {
            bail!(InsufficientData, "no positive {name} values for one gender in the largest component");
        }
        let mut r = welch_t_test(&male, &female)?;
        r.test_name = alloc::format!("welch_t_log_{name}");
        Ok(r)
    };
    Ok((run("degree", |m| f64::from(m.degree))?, run("betweenness", |m| m.betweenness)?))
}

/// χ² test that women and men are equally likely to sit in the largest
/// component; group a is women.
pub fn largest_component_test(nodes: &[NodeMetrics]) -> Result<TestResult> {
    let count = |g: Gender| {
        let members = nodes.iter().filter(|m| m.gender == g);
        let total = members.clone().count() as u64;
        (members.filter(|m| m.in_largest).count() as u64, total)
    };
    let (wf, nf) = count(Gender::Female);
    let (wm, nm) = count(Gender::Male);
    let mut r = chi2_two_proportion(wf, nf, wm, nm)?;
    r.test_name = "chi2_largest_component".to_string();
    Ok(r)
}
