//! Seeded synthetic corpora with a ground-truth ledger.
//!
//! Every seat is filled by a coin flip with the company country's female
//! probability. A seat is given to an already seated director of the drawn
//! gender with probability `multi_directorship_rate`, otherwise to a new
//! person.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use interlock_core::corpus::{CompanyRow, Gender, RawDirectorRow};
use interlock_core::stats::special::ln_gamma;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files;
use crate::ingest::{COMPANY_COLUMNS, DIRECTOR_COLUMNS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountrySpec {
    pub weight: f64,
    /// Probability that a seat is held by a woman.
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSpec {
    pub weight: f64,
    #[serde(default)]
    pub industries: BTreeMap<String, f64>,
}

/// Negative binomial with the given mean and dispersion, truncated to
/// `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoardSizeSpec {
    pub mean: f64,
    pub dispersion: f64,
    pub min: u32,
    pub max: u32,
}

impl Default for BoardSizeSpec {
    fn default() -> Self {
        BoardSizeSpec { mean: 11.0, dispersion: 8.0, min: 1, max: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgeSpec {
    pub male_mean: f64,
    pub male_sd: f64,
    pub female_mean: f64,
    pub female_sd: f64,
    pub min: u32,
    pub max: u32,
}

impl Default for AgeSpec {
    fn default() -> Self {
        AgeSpec { male_mean: 55.1, male_sd: 8.5, female_mean: 50.8, female_sd: 8.0, min: 21, max: 95 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_companies: usize,
    #[serde(default)]
    pub board_size: BoardSizeSpec,
    /// Share of companies listed with no directors at all.
    #[serde(default)]
    pub empty_board_rate: f64,
    #[serde(default)]
    pub multi_directorship_rate: f64,
    #[serde(default)]
    pub missing_gender_rate: f64,
    #[serde(default)]
    pub missing_age_rate: f64,
    /// Chance that a director row is listed twice for the same company.
    #[serde(default)]
    pub duplicate_row_rate: f64,
    /// Chance that a new person reuses an existing person's name.
    #[serde(default)]
    pub name_collision_rate: f64,
    /// Upper bound on distinct people; unbounded when absent.
    #[serde(default)]
    pub director_pool: Option<usize>,
    #[serde(default)]
    pub age: AgeSpec,
    pub countries: BTreeMap<String, CountrySpec>,
    pub sectors: BTreeMap<String, SectorSpec>,
}

impl SynthSpec {
    pub fn from_toml(text: &str, path: &Path) -> Result<SynthSpec> {
        toml::from_str(text).map_err(|e| Error::parse(path, e))
    }

    pub fn load(path: &Path) -> Result<SynthSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SynthSpec::from_toml(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        prob("empty_board_rate", self.empty_board_rate)?;
        prob("multi_directorship_rate", self.multi_directorship_rate)?;
        prob("missing_gender_rate", self.missing_gender_rate)?;
        prob("missing_age_rate", self.missing_age_rate)?;
        prob("duplicate_row_rate", self.duplicate_row_rate)?;
        prob("name_collision_rate", self.name_collision_rate)?;
        for (name, c) in &self.countries {
            prob(&format!("p for country {name}"), c.p)?;
        }
        let b = &self.board_size;
        if b.min == 0 || b.min > b.max {
            return Err(Error::Config(format!("board size support [{}, {}] is empty or includes 0", b.min, b.max)));
        }
        if !(b.mean > 0.0 && b.dispersion > 0.0) {
            return Err(Error::Config("board size mean and dispersion must be positive".into()));
        }
        let a = &self.age;
        if !(a.male_sd >= 0.0 && a.female_sd >= 0.0) || a.min > a.max {
            return Err(Error::Config("age spec has a negative sd or an empty range".into()));
        }
        if self.n_companies == 0 {
            return Ok(());
        }
        check_weights("country", self.countries.values().map(|c| c.weight))?;
        check_weights("sector", self.sectors.values().map(|s| s.weight))?;
        for (name, s) in &self.sectors {
            if !s.industries.is_empty() {
                check_weights(&format!("industry in sector {name}"), s.industries.values().copied())?;
            }
        }
        if let Some(pool) = self.director_pool {
            if (b.max as usize) > pool {
                return Err(Error::Config(format!(
                    "infeasible spec: boards of up to {} seats cannot be filled from a pool of {pool} directors",
                    b.max
                )));
            }
        }
        Ok(())
    }
}

fn check_weights(what: &str, w: impl Iterator<Item = f64>) -> Result<()> {
    let w: Vec<f64> = w.collect();
    if w.is_empty() {
        return Err(Error::Config(format!("at least one {what} weight is required")));
    }
    if w.iter().any(|&x| !(x.is_finite() && x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::Config(format!("{what} weights must be non-negative with a positive sum")));
    }
    Ok(())
}

/// Truncated negative binomial probabilities for sizes `min..=max`.
pub fn board_size_pmf(b: &BoardSizeSpec) -> Vec<(u32, f64)> {
    let r = b.dispersion;
    let (lp, lq) = ((b.mean / (r + b.mean)).ln(), (r / (r + b.mean)).ln());
    let log: Vec<f64> = (b.min..=b.max)
        .map(|k| {
            let k = k as f64;
            ln_gamma(k + r) - ln_gamma(r) - ln_gamma(k + 1.0) + r * lq + k * lp
        })
        .collect();
    let top = log.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    (b.min..=b.max).zip(w.iter().map(|x| x / z)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CountryTruth {
    pub planted_p: f64,
    pub companies: u64,
    pub seats: u64,
    /// Seats held by women, counting directors whose gender is hidden.
    pub female_seats: u64,
}

/// What the generator actually did.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SynthLedger {
    pub seed: u64,
    pub countries: BTreeMap<String, CountryTruth>,
    pub board_size_pmf: Vec<(u32, f64)>,
    /// Companies per realised board size.
    pub board_size_counts: BTreeMap<u32, u64>,
    pub people: usize,
    /// Distinct (company, person) pairs.
    pub seats: usize,
    pub duplicate_rows: usize,
    /// True person behind each director row, in file order.
    pub row_person: Vec<u32>,
}

pub struct SynthCorpus {
    pub companies: Vec<CompanyRow>,
    pub directors: Vec<RawDirectorRow>,
    pub ledger: SynthLedger,
}

const GIVEN_MALE: [&str; 16] = [
    "Adam", "Bernard", "Carlos", "David", "Erik", "Frank", "Georg", "Hans", "Ivan", "James", "Karl", "Luca", "Marco",
    "Nils", "Oscar", "Pierre",
];
const GIVEN_FEMALE: [&str; 16] = [
    "Anna", "Beatrice", "Clara", "Diana", "Elena", "Fiona", "Greta", "Helen", "Ines", "Julia", "Karin", "Laura",
    "Maria", "Nora", "Olga", "Paula",
];
const SURNAMES: [&str; 24] = [
    "Andersen", "Baker", "Costa", "Dubois", "Engel", "Fischer", "Garcia", "Hansen", "Ito", "Jensen", "Kowalski",
    "Larsen", "Moreau", "Novak", "Olsen", "Petrov", "Quinn", "Rossi", "Schmidt", "Tanaka", "Urban", "Vogel",
    "Weber", "Young",
];

struct Person {
    name: String,
    gender: Gender,
    shown_gender: Gender,
    shown_age: Option<u32>,
}

struct Generator<'s> {
    spec: &'s SynthSpec,
    rng: ChaCha8Rng,
    people: Vec<Person>,
    by_gender: [Vec<u32>; 2],
    names: HashMap<String, u32>,
    observed: HashSet<(String, Gender, Option<u32>)>,
    ages: [Normal<f64>; 2],
}

impl Generator<'_> {
    fn fresh_name(&mut self, female: bool) -> String {
        let given = if female { GIVEN_FEMALE } else { GIVEN_MALE };
        let base = format!("{} {}", given[self.rng.random_range(0..given.len())], SURNAMES[self.rng.random_range(0..SURNAMES.len())]);
        let count = self.names.entry(base.clone()).or_insert(0);
        *count += 1;
        if *count == 1 {
            base
        } else {
            format!("{base} {count}")
        }
    }

    fn new_person(&mut self, female: bool) -> u32 {
        let gender = if female { Gender::Female } else { Gender::Male };
        let shown_gender = if self.rng.random_bool(self.spec.missing_gender_rate) { Gender::Missing } else { gender };
        let a = &self.spec.age;
        let age = self.ages[female as usize].sample(&mut self.rng).round().clamp(a.min as f64, a.max as f64) as u32;
        let shown_age = (!self.rng.random_bool(self.spec.missing_age_rate)).then_some(age);
        let mut name = None;
        if !self.people.is_empty() && self.rng.random_bool(self.spec.name_collision_rate) {
            let other = &self.people[self.rng.random_range(0..self.people.len())].name;
            if !self.observed.contains(&(other.clone(), shown_gender, shown_age)) {
                name = Some(other.clone());
            }
        }
        let name = match name {
            Some(n) => n,
            None => self.fresh_name(female),
        };
        self.observed.insert((name.clone(), shown_gender, shown_age));
        let id = self.people.len() as u32;
        self.people.push(Person { name, gender, shown_gender, shown_age });
        self.by_gender[female as usize].push(id);
        id
    }

    fn reuse(&mut self, female: bool, board: &[u32]) -> Option<u32> {
        let pool = &self.by_gender[female as usize];
        if pool.len() <= board.len() {
            // Few candidates: scan for one not already on this board.
            let free: Vec<u32> = pool.iter().copied().filter(|p| !board.contains(p)).collect();
            return (!free.is_empty()).then(|| free[self.rng.random_range(0..free.len())]);
        }
        loop {
            let p = pool[self.rng.random_range(0..pool.len())];
            if !board.contains(&p) {
                return Some(p);
            }
        }
    }

    fn pick(&mut self, female: bool, board: &[u32]) -> Result<u32> {
        let pool_full = self.spec.director_pool.is_some_and(|cap| self.people.len() >= cap);
        if pool_full || self.rng.random_bool(self.spec.multi_directorship_rate) {
            if let Some(p) = self.reuse(female, board) {
                return Ok(p);
            }
            if pool_full {
                return Err(Error::Config(format!(
                    "infeasible spec: director pool of {} exhausted",
                    self.spec.director_pool.unwrap_or(0)
                )));
            }
        }
        Ok(self.new_person(female))
    }
}

fn weighted<'a, T>(items: impl Iterator<Item = (&'a String, T)>, weight: impl Fn(&T) -> f64) -> (Vec<&'a String>, Vec<T>, WeightedIndex<f64>) {
    let (names, vals): (Vec<&String>, Vec<T>) = items.unzip();
    let w = WeightedIndex::new(vals.iter().map(weight)).expect("weights validated");
    (names, vals, w)
}

pub fn synth_corpus(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let pmf = board_size_pmf(&spec.board_size);
    let mut ledger = SynthLedger { seed: spec.seed, board_size_pmf: pmf.clone(), ..Default::default() };
    let mut companies = Vec::with_capacity(spec.n_companies);
    let mut directors = Vec::new();
    if spec.n_companies == 0 {
        return Ok(SynthCorpus { companies, directors, ledger });
    }
    let normal = |m: f64, s: f64| Normal::new(m, s).map_err(|e| Error::Config(format!("age distribution: {e}")));
    let mut g = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        people: Vec::new(),
        by_gender: [Vec::new(), Vec::new()],
        names: HashMap::new(),
        observed: HashSet::new(),
        ages: [normal(spec.age.male_mean, spec.age.male_sd)?, normal(spec.age.female_mean, spec.age.female_sd)?],
    };
    let (country_names, country_specs, country_dist) = weighted(spec.countries.iter(), |c| c.weight);
    let (sector_names, sector_specs, sector_dist) = weighted(spec.sectors.iter(), |s| s.weight);
    let industry_dists: Vec<Option<(Vec<&String>, Vec<&f64>, WeightedIndex<f64>)>> = sector_specs
        .iter()
        .map(|s| (!s.industries.is_empty()).then(|| weighted(s.industries.iter(), |w| **w)))
        .collect();
    let size_dist = WeightedIndex::new(pmf.iter().map(|&(_, p)| p)).expect("pmf is positive");
    let revenue = LogNormal::<f64>::new(19.0, 1.5).expect("valid");
    let staff = LogNormal::<f64>::new(6.5, 1.5).expect("valid");
    for (name, c) in &spec.countries {
        ledger.countries.insert(name.clone(), CountryTruth { planted_p: c.p, ..Default::default() });
    }

    for i in 0..spec.n_companies {
        let ci = country_dist.sample(&mut g.rng);
        let si = sector_dist.sample(&mut g.rng);
        let industry = industry_dists[si].as_ref().map(|(names, _, d)| names[d.sample(&mut g.rng)].clone());
        let company_id = format!("C{i:06}");
        companies.push(CompanyRow {
            company_id: company_id.clone(),
            name: format!("Company {i}"),
            sector: Some(sector_names[si].clone()),
            industry,
            country: Some(country_names[ci].clone()),
            revenue: Some(revenue.sample(&mut g.rng).round()),
            employees: Some(staff.sample(&mut g.rng).round() as u64),
            date_incorporated: Some(format!(
                "{}-{:02}-{:02}",
                g.rng.random_range(1900..2016),
                g.rng.random_range(1..13),
                g.rng.random_range(1..29)
            )),
        });
        let size = if g.rng.random_bool(spec.empty_board_rate) { 0 } else { pmf[size_dist.sample(&mut g.rng)].0 };
        let p = country_specs[ci].p;
        let mut board: Vec<u32> = Vec::with_capacity(size as usize);
        for _ in 0..size {
            let female = g.rng.random_bool(p);
            let person = g.pick(female, &board)?;
            board.push(person);
            let copies = if g.rng.random_bool(spec.duplicate_row_rate) { 2 } else { 1 };
            ledger.duplicate_rows += copies - 1;
            for _ in 0..copies {
                let who = &g.people[person as usize];
                directors.push(RawDirectorRow::new(&company_id, &who.name, who.shown_gender, who.shown_age));
                ledger.row_person.push(person);
            }
        }
        let truth = ledger.countries.get_mut(country_names[ci].as_str()).expect("inserted above");
        truth.companies += 1;
        truth.seats += board.len() as u64;
        truth.female_seats += board.iter().filter(|&&p| g.people[p as usize].gender == Gender::Female).count() as u64;
        *ledger.board_size_counts.entry(size).or_insert(0) += 1;
        ledger.seats += board.len();
    }
    ledger.people = g.people.len();
    Ok(SynthCorpus { companies, directors, ledger })
}

/// Writes `companies.csv` and `directors.csv` into `dir`.
pub fn write_csvs(dir: &Path, s: &SynthCorpus) -> Result<()> {
    let opt = |v: &Option<String>| v.clone().unwrap_or_default();
    let path = dir.join("companies.csv");
    let mut w = files::csv_writer(&path, &COMPANY_COLUMNS)?;
    for c in &s.companies {
        w.write_record([
            c.company_id.clone(),
            c.name.clone(),
            opt(&c.sector),
            opt(&c.industry),
            opt(&c.country),
            c.revenue.map(|x| x.to_string()).unwrap_or_default(),
            c.employees.map(|x| x.to_string()).unwrap_or_default(),
            opt(&c.date_incorporated),
        ])
        .map_err(|e| Error::parse(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("directors.csv");
    let mut w = files::csv_writer(&path, &DIRECTOR_COLUMNS)?;
    for d in &s.directors {
        w.write_record([
            d.company_id.as_str(),
            d.name.as_str(),
            d.gender.code(),
            &d.age.map(|a| a.to_string()).unwrap_or_default(),
        ])
        .map_err(|e| Error::parse(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}
