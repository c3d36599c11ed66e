//! Company and director records.
//!
//! Raw director rows are resolved into individuals by exact equality of the
//! `(name, gender, age)` triple, where a missing gender or age only matches
//! another missing value. Names are compared after trimming surrounding
//! whitespace and are otherwise case-sensitive.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Dense director index, `0..corpus.directors.len()`.
pub type DirectorId = u32;

/// Ages outside this range are reported at ingest but kept.
pub const PLAUSIBLE_AGE: core::ops::RangeInclusive<u32> = 10..=120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
    Missing,
}

impl Gender {
    /// Parses the CSV encoding: `M`, `F` or the empty string.
    pub fn from_code(code: &str) -> Option<Gender> {
        match code.trim() {
            "M" => Some(Gender::Male),
            "F" => Some(Gender::Female),
            "" => Some(Gender::Missing),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Gender::Male => "M",
            Gender::Female => "F",
            Gender::Missing => "",
        }
    }

    pub fn is_known(self) -> bool {
        self != Gender::Missing
    }
}

/// One line of the directors table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDirectorRow {
    pub company_id: String,
    pub name: String,
    pub gender: Gender,
    pub age: Option<u32>,
}

impl RawDirectorRow {
    pub fn new(company_id: &str, name: &str, gender: Gender, age: Option<u32>) -> Self {
        RawDirectorRow {
            company_id: company_id.to_string(),
            name: name.to_string(),
            gender,
            age,
        }
    }
}

/// One line of the companies table, before boards are attached.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompanyRow {
    pub company_id: String,
    pub name: String,
    pub sector: Option<String>,
    pub industry: Option<String>,
    pub country: Option<String>,
    pub revenue: Option<f64>,
    pub employees: Option<u64>,
    pub date_incorporated: Option<String>,
}

impl CompanyRow {
    pub fn new(company_id: &str) -> Self {
        CompanyRow {
            company_id: company_id.to_string(),
            name: company_id.to_string(),
            ..CompanyRow::default()
        }
    }

    pub fn with_country(mut self, country: &str) -> Self {
        self.country = Some(country.to_string());
        self
    }

    pub fn with_sector(mut self, sector: &str, industry: &str) -> Self {
        self.sector = Some(sector.to_string());
        self.industry = Some(industry.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyRecord {
    pub company_id: String,
    pub name: String,
    pub sector: Option<String>,
    pub industry: Option<String>,
    pub country: Option<String>,
    pub revenue: Option<f64>,
    pub employees: Option<u64>,
    pub date_incorporated: Option<String>,
    /// Sorted, duplicate-free director ids.
    pub board: Vec<DirectorId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectorRecord {
    pub director_id: DirectorId,
    pub name: String,
    pub gender: Gender,
    pub age: Option<u32>,
    /// Sorted indices into [`Corpus::companies`].
    pub seats: Vec<u32>,
    pub inferred_country: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MissingCount {
    pub count: usize,
    pub percent: f64,
}

impl MissingCount {
    fn of(count: usize, total: usize) -> Self {
        let percent = if total == 0 {
            0.0
        } else {
            100.0 * count as f64 / total as f64
        };
        MissingCount { count, percent }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MissingStats {
    pub n_companies: usize,
    pub n_directors: usize,
    pub companies_without_directors: usize,
    pub country: MissingCount,
    pub sector: MissingCount,
    pub industry: MissingCount,
    pub gender: MissingCount,
    pub age: MissingCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    /// Row rejected: empty company id.
    EmptyCompanyId,
    /// Row rejected: company id not present in the companies table.
    UnknownCompany(String),
    /// Row rejected: gender is not `M`, `F` or empty.
    InvalidGender(String),
    /// Row rejected: age is not a positive integer.
    InvalidAge(String),
    /// Row kept: age outside [`PLAUSIBLE_AGE`].
    ImplausibleAge(u32),
    /// Row collapsed into an identical seat on the same board.
    DuplicateSeat,
}

impl DiagnosticKind {
    pub fn is_rejection(&self) -> bool {
        !matches!(
            self,
            DiagnosticKind::ImplausibleAge(_) | DiagnosticKind::DuplicateSeat
        )
    }
}

/// Row-level finding; `row` is the zero-based index among director rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub row: usize,
    pub kind: DiagnosticKind,
}

/// Immutable, referentially intact set of companies and directors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    /// Sorted by `company_id`.
    pub companies: Vec<CompanyRecord>,
    /// `directors[i].director_id == i`.
    pub directors: Vec<DirectorRecord>,
    pub missing_stats: MissingStats,
}

/// Result of building a corpus from raw rows.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub diagnostics: Vec<Diagnostic>,
    /// Director id of every input row, `None` for rejected rows.
    pub row_directors: Vec<Option<DirectorId>>,
}

impl Ingested {
    pub fn rejected_rows(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.kind.is_rejection()).count()
    }
}

type IdentityKey<'a> = (&'a str, Gender, Option<u32>);

fn identity_key(row: &RawDirectorRow) -> IdentityKey<'_> {
    (row.name.trim(), row.gender, row.age)
}

/// Maps every row to a director id.
///
/// Two rows share an id iff their trimmed names, genders and ages are equal.
/// Ids are ranks of the distinct triples in sorted order, so they depend only
/// on the set of triples and not on row order.
pub fn resolve_identity(rows: &[RawDirectorRow]) -> Vec<DirectorId> {
    let mut keys: Vec<IdentityKey<'_>> = rows.iter().map(identity_key).collect();
    keys.sort_unstable();
    keys.dedup();
    rows.iter()
        .map(|row| {
            let key = identity_key(row);
            keys.binary_search(&key).expect("key collected above") as DirectorId
        })
        .collect()
}

/// Most frequent value of `attr` over the director's companies, ignoring
/// companies where it is missing. Ties go to the lexicographically smallest
/// value.
pub fn modal_attribute<'c, F>(seats: &[u32], companies: &'c [CompanyRecord], attr: F) -> Option<&'c str>
where
    F: Fn(&'c CompanyRecord) -> Option<&'c str>,
{
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for &c in seats {
        if let Some(value) = attr(&companies[c as usize]) {
            *counts.entry(value).or_default() += 1;
        }
    }
    // BTreeMap iterates in key order; keep the first maximum.
    let mut best: Option<(&str, usize)> = None;
    for (value, count) in counts {
        if best.is_none_or(|(_, b)| count > b) {
            best = Some((value, count));
        }
    }
    best.map(|(value, _)| value)
}

/// Modal country of the director's companies.
pub fn infer_country(director: &DirectorRecord, corpus: &Corpus) -> Option<String> {
    modal_attribute(&director.seats, &corpus.companies, |c| c.country.as_deref())
        .map(str::to_string)
}

/// Per-field missing counts and percentages.
pub fn missing_data_report(corpus: &Corpus) -> MissingStats {
    compute_missing(&corpus.companies, &corpus.directors)
}

fn compute_missing(companies: &[CompanyRecord], directors: &[DirectorRecord]) -> MissingStats {
    let nc = companies.len();
    let nd = directors.len();
    let count_c = |f: fn(&CompanyRecord) -> bool| companies.iter().filter(|c| f(c)).count();
    MissingStats {
        n_companies: nc,
        n_directors: nd,
        companies_without_directors: count_c(|c| c.board.is_empty()),
        country: MissingCount::of(count_c(|c| c.country.is_none()), nc),
        sector: MissingCount::of(count_c(|c| c.sector.is_none()), nc),
        industry: MissingCount::of(count_c(|c| c.industry.is_none()), nc),
        gender: MissingCount::of(
            directors.iter().filter(|d| d.gender == Gender::Missing).count(),
            nd,
        ),
        age: MissingCount::of(directors.iter().filter(|d| d.age.is_none()).count(), nd),
    }
}

fn normalize_optional(value: Option<String>) -> Option<String> {
    value.and_then(|v| {
        let t = v.trim();
        (!t.is_empty()).then(|| t.to_string())
    })
}

impl Corpus {
    /// Builds a corpus from the companies table and raw director rows.
    ///
    /// Rows with an empty or unknown company id, or with a zero age, are
    /// rejected with a diagnostic. A repeated `(company, director)` pair is
    /// collapsed into one seat. Duplicate company ids are a hard error.
    pub fn build(companies: Vec<CompanyRow>, rows: Vec<RawDirectorRow>) -> Result<Ingested> {
        let mut records: Vec<CompanyRecord> = companies
            .into_iter()
            .map(|c| CompanyRecord {
                company_id: c.company_id.trim().to_string(),
                name: c.name.trim().to_string(),
                sector: normalize_optional(c.sector),
                industry: normalize_optional(c.industry),
                country: normalize_optional(c.country),
                revenue: c.revenue,
                employees: c.employees,
                date_incorporated: normalize_optional(c.date_incorporated),
                board: Vec::new(),
            })
            .collect();
        records.sort_by(|a, b| a.company_id.cmp(&b.company_id));
        for pair in records.windows(2) {
            if pair[0].company_id == pair[1].company_id {
                bail!(DuplicateCompany, "{}", pair[0].company_id);
            }
        }
        if let Some(c) = records.iter().find(|c| c.company_id.is_empty()) {
            bail!(Integrity, "company `{}` has an empty company_id", c.name);
        }

        let mut diagnostics = Vec::new();
        let mut accepted: Vec<(usize, u32)> = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let cid = row.company_id.trim();
            if cid.is_empty() {
                diagnostics.push(Diagnostic { row: i, kind: DiagnosticKind::EmptyCompanyId });
                continue;
            }
            let Ok(company) = records.binary_search_by(|c| c.company_id.as_str().cmp(cid)) else {
                diagnostics.push(Diagnostic {
                    row: i,
                    kind: DiagnosticKind::UnknownCompany(cid.to_string()),
                });
                continue;
            };
            match row.age {
                Some(0) => {
                    diagnostics.push(Diagnostic {
                        row: i,
                        kind: DiagnosticKind::InvalidAge("0".to_string()),
                    });
                    continue;
                }
                Some(age) if !PLAUSIBLE_AGE.contains(&age) => {
                    diagnostics.push(Diagnostic { row: i, kind: DiagnosticKind::ImplausibleAge(age) });
                }
                _ => {}
            }
            accepted.push((i, company as u32));
        }

        let accepted_rows: Vec<RawDirectorRow> =
            accepted.iter().map(|&(i, _)| rows[i].clone()).collect();
        let ids = resolve_identity(&accepted_rows);
        let n_directors = ids.iter().map(|&id| id as usize + 1).max().unwrap_or(0);

        let mut row_directors = alloc::vec![None; rows.len()];
        let mut directors: Vec<Option<DirectorRecord>> = alloc::vec![None; n_directors];
        let mut seats: Vec<(u32, DirectorId, usize)> = Vec::with_capacity(accepted.len());
        for (k, &(row_idx, company)) in accepted.iter().enumerate() {
            let id = ids[k];
            row_directors[row_idx] = Some(id);
            seats.push((company, id, row_idx));
            directors[id as usize].get_or_insert_with(|| {
                let row = &rows[row_idx];
                DirectorRecord {
                    director_id: id,
                    name: row.name.trim().to_string(),
                    gender: row.gender,
                    age: row.age,
                    seats: Vec::new(),
                    inferred_country: None,
                }
            });
        }
        seats.sort_unstable();
        let mut last: Option<(u32, DirectorId)> = None;
        for &(company, id, row_idx) in &seats {
            if last == Some((company, id)) {
                diagnostics.push(Diagnostic { row: row_idx, kind: DiagnosticKind::DuplicateSeat });
                continue;
            }
            last = Some((company, id));
            records[company as usize].board.push(id);
            directors[id as usize]
                .as_mut()
                .expect("director created for every accepted row")
                .seats
                .push(company);
        }
        diagnostics.sort_by_key(|d| d.row);

        let mut directors: Vec<DirectorRecord> =
            directors.into_iter().map(|d| d.expect("ids are dense")).collect();
        for d in &mut directors {
            d.seats.sort_unstable();
            d.inferred_country =
                modal_attribute(&d.seats, &records, |c| c.country.as_deref()).map(str::to_string);
        }
        for c in &mut records {
            c.board.sort_unstable();
        }
        let missing_stats = compute_missing(&records, &directors);
        Ok(Ingested {
            corpus: Corpus { companies: records, directors, missing_stats },
            diagnostics,
            row_directors,
        })
    }

    /// Reassembles a corpus from stored parts, checking every invariant.
    pub fn from_parts(companies: Vec<CompanyRecord>, directors: Vec<DirectorRecord>) -> Result<Corpus> {
        for pair in companies.windows(2) {
            match pair[0].company_id.cmp(&pair[1].company_id) {
                core::cmp::Ordering::Less => {}
                core::cmp::Ordering::Equal => bail!(DuplicateCompany, "{}", pair[0].company_id),
                core::cmp::Ordering::Greater => {
                    bail!(Integrity, "companies are not sorted by company_id")
                }
            }
        }
        let mut keys: Vec<IdentityKey<'_>> = Vec::with_capacity(directors.len());
        for (i, d) in directors.iter().enumerate() {
            if d.director_id as usize != i {
                bail!(Integrity, "director at position {i} has id {}", d.director_id);
            }
            if d.seats.is_empty() {
                bail!(Integrity, "director {i} holds no seats");
            }
            if d.seats.windows(2).any(|w| w[0] >= w[1]) {
                bail!(Integrity, "seats of director {i} are not sorted and unique");
            }
            if let Some(&c) = d.seats.iter().find(|&&c| c as usize >= companies.len()) {
                bail!(Integrity, "director {i} references missing company index {c}");
            }
            if d.age == Some(0) {
                bail!(Integrity, "director {i} has age 0");
            }
            keys.push((d.name.as_str(), d.gender, d.age));
        }
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            bail!(Integrity, "two directors share the same (name, gender, age)");
        }
        let mut seat_pairs: Vec<(u32, DirectorId)> = Vec::new();
        for (ci, c) in companies.iter().enumerate() {
            if c.board.windows(2).any(|w| w[0] >= w[1]) {
                bail!(Integrity, "board of `{}` is not sorted and unique", c.company_id);
            }
            for &d in &c.board {
                if d as usize >= directors.len() {
                    bail!(Integrity, "board of `{}` references missing director {d}", c.company_id);
                }
                seat_pairs.push((ci as u32, d));
            }
        }
        let mut from_directors: Vec<(u32, DirectorId)> = directors
            .iter()
            .flat_map(|d| d.seats.iter().map(move |&c| (c, d.director_id)))
            .collect();
        from_directors.sort_unstable();
        if seat_pairs != from_directors {
            bail!(Integrity, "boards and director seats disagree");
        }
        let missing_stats = compute_missing(&companies, &directors);
        Ok(Corpus { companies, directors, missing_stats })
    }

    pub fn total_seats(&self) -> usize {
        self.companies.iter().map(|c| c.board.len()).sum()
    }

    pub fn company_index(&self, company_id: &str) -> Option<usize> {
        self.companies
            .binary_search_by(|c| c.company_id.as_str().cmp(company_id))
            .ok()
    }

    pub fn gender_of(&self, id: DirectorId) -> Gender {
        self.directors[id as usize].gender
    }

    /// Distinct company countries in sorted order.
    pub fn countries(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.companies.iter().filter_map(|c| c.country.as_deref()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks the cross-walk between boards and seats.
    pub fn check_integrity(&self) -> Result<()> {
        Corpus::from_parts(self.companies.clone(), self.directors.clone()).map(|_| ())
    }
}

/// Describes a row for diagnostics.
pub fn describe(row: &RawDirectorRow) -> String {
    let age = row.age.map_or_else(|| "blank".to_string(), |a| format!("{a}"));
    format!("{} ({}, {}) at {}", row.name, row.gender.code(), age, row.company_id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use Gender::*;

    fn row(c: &str, n: &str, g: Gender, a: Option<u32>) -> RawDirectorRow {
        RawDirectorRow::new(c, n, g, a)
    }

    #[test]
    fn empty_directors_table() {
        let ing = Corpus::build(vec![CompanyRow::new("C1")], vec![]).unwrap();
        assert_eq!(ing.corpus.companies.len(), 1);
        assert!(ing.corpus.directors.is_empty());
        assert!(ing.corpus.companies[0].board.is_empty());
        assert_eq!(ing.corpus.missing_stats.companies_without_directors, 1);
    }

    #[test]
    fn same_triple_on_two_boards_is_one_director() {
        let ing = Corpus::build(
            vec![CompanyRow::new("C1"), CompanyRow::new("C2")],
            vec![row("C1", "Jane Doe", Female, Some(52)), row("C2", "Jane Doe", Female, Some(52))],
        )
        .unwrap();
        assert_eq!(ing.corpus.directors.len(), 1);
        assert_eq!(ing.corpus.directors[0].seats, vec![0, 1]);
    }

    #[test]
    fn age_mismatch_blocks_merging() {
        let ing = Corpus::build(
            vec![CompanyRow::new("C1"), CompanyRow::new("C2")],
            vec![row("C1", "Jane Doe", Female, Some(52)), row("C2", "Jane Doe", Female, None)],
        )
        .unwrap();
        assert_eq!(ing.corpus.directors.len(), 2);
    }

    #[test]
    fn resolve_identity_examples() {
        let ids = resolve_identity(&[row("a", "X", Male, Some(40)), row("b", "X", Male, Some(40))]);
        assert_eq!(ids[0], ids[1]);
        let ids = resolve_identity(&[row("a", "X", Male, None), row("b", "X", Male, None)]);
        assert_eq!(ids[0], ids[1]);
        let ids = resolve_identity(&[row("a", "X", Male, Some(40)), row("b", "X", Female, Some(40))]);
        assert_ne!(ids[0], ids[1]);
        // Missing gender never matches a known one.
        let ids = resolve_identity(&[row("a", "X", Male, Some(40)), row("b", "X", Missing, Some(40))]);
        assert_ne!(ids[0], ids[1]);
    }

    #[test]
    fn names_are_trimmed_but_case_sensitive() {
        let ids = resolve_identity(&[
            row("a", " Ann Lee ", Female, None),
            row("b", "Ann Lee", Female, None),
            row("c", "ann lee", Female, None),
        ]);
        assert_eq!(ids[0], ids[1]);
        assert_ne!(ids[0], ids[2]);
    }

    fn corpus_with_countries(countries: &[Option<&str>]) -> Corpus {
        let companies = countries
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let row = CompanyRow::new(&format!("C{i}"));
                match c {
                    Some(code) => row.with_country(code),
                    None => row,
                }
            })
            .collect();
        let rows = (0..countries.len())
            .map(|i| row(&format!("C{i}"), "Pat", Female, Some(60)))
            .collect();
        Corpus::build(companies, rows).unwrap().corpus
    }

    #[test]
    fn country_is_modal() {
        let corpus = corpus_with_countries(&[Some("SG"), Some("SG"), Some("US")]);
        assert_eq!(infer_country(&corpus.directors[0], &corpus).as_deref(), Some("SG"));
        assert_eq!(corpus.directors[0].inferred_country.as_deref(), Some("SG"));
    }

    #[test]
    fn country_absent_without_evidence() {
        let corpus = corpus_with_countries(&[None, None]);
        assert_eq!(infer_country(&corpus.directors[0], &corpus), None);
    }

    #[test]
    fn country_tie_is_lexicographic_under_permutation() {
        for order in [[Some("US"), Some("SG"), None], [Some("SG"), None, Some("US")]] {
            let corpus = corpus_with_countries(&order);
            assert_eq!(infer_country(&corpus.directors[0], &corpus).as_deref(), Some("SG"));
        }
    }

    #[test]
    fn missing_report_counts() {
        let companies = vec![CompanyRow::new("C1").with_country("SG").with_sector("S", "I")];
        let rows = vec![
            row("C1", "a", Male, Some(50)),
            row("C1", "b", Male, Some(50)),
            row("C1", "c", Female, Some(50)),
            row("C1", "d", Missing, Some(50)),
        ];
        let corpus = Corpus::build(companies, rows).unwrap().corpus;
        let m = missing_data_report(&corpus);
        assert_eq!(m.gender.count, 1);
        assert_eq!(m.gender.percent, 25.0);
        assert_eq!(m.age.count, 0);
        assert_eq!(m.country.count, 0);
        assert_eq!(m.sector.count, 0);
    }

    #[test]
    fn rows_are_rejected_or_flagged() {
        let rows = vec![
            row("", "a", Male, None),
            row("NOPE", "b", Male, None),
            row("C1", "c", Male, Some(0)),
            row("C1", "d", Male, Some(1)),
            row("C1", "e", Male, Some(40)),
            row("C1", "e", Male, Some(40)),
        ];
        let ing = Corpus::build(vec![CompanyRow::new("C1")], rows).unwrap();
        let kinds: Vec<_> = ing.diagnostics.iter().map(|d| (d.row, d.kind.clone())).collect();
        assert_eq!(
            kinds,
            vec![
                (0, DiagnosticKind::EmptyCompanyId),
                (1, DiagnosticKind::UnknownCompany("NOPE".into())),
                (2, DiagnosticKind::InvalidAge("0".into())),
                (3, DiagnosticKind::ImplausibleAge(1)),
                (5, DiagnosticKind::DuplicateSeat),
            ]
        );
        assert_eq!(ing.rejected_rows(), 3);
        assert_eq!(ing.corpus.directors.len(), 2);
        assert_eq!(ing.corpus.companies[0].board.len(), 2);
        assert_eq!(ing.row_directors[4], ing.row_directors[5]);
    }

    #[test]
    fn duplicate_company_is_fatal() {
        let err = Corpus::build(vec![CompanyRow::new("C1"), CompanyRow::new("C1")], vec![]).unwrap_err();
        assert_eq!(err, crate::Error::DuplicateCompany("C1".into()));
    }

    #[test]
    fn from_parts_detects_broken_crosswalk() {
        let ing = Corpus::build(
            vec![CompanyRow::new("C1"), CompanyRow::new("C2")],
            vec![row("C1", "a", Male, None), row("C2", "a", Male, None)],
        )
        .unwrap();
        let mut corpus = ing.corpus;
        corpus.check_integrity().unwrap();
        corpus.companies[1].board.clear();
        assert!(matches!(
            Corpus::from_parts(corpus.companies, corpus.directors),
            Err(crate::Error::Integrity(_))
        ));
    }
}
