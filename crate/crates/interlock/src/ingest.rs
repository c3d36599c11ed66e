//! CSV input and the `corpus.json` interchange format.

use std::io::Read;
use std::path::Path;

use interlock_core::corpus::{
    CompanyRecord, CompanyRow, Corpus, Diagnostic, DiagnosticKind, DirectorId, DirectorRecord, Gender, Ingested,
    MissingStats, RawDirectorRow,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files;

pub const COMPANY_COLUMNS: [&str; 8] =
    ["company_id", "name", "sector", "industry", "country", "revenue", "employees", "date_incorporated"];
pub const DIRECTOR_COLUMNS: [&str; 4] = ["company_id", "name", "gender", "age"];

fn column_indices(path: &Path, headers: &csv::StringRecord, wanted: &[&str]) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|col| {
            headers
                .iter()
                .position(|h| h.trim() == *col)
                .ok_or_else(|| Error::MissingColumn { path: path.to_path_buf(), column: col.to_string() })
        })
        .collect()
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().flexible(false).from_reader(source)
}

fn optional(s: &str) -> Option<String> {
    let s = s.trim();
    (!s.is_empty()).then(|| s.to_string())
}

/// Parses the companies table. A malformed number is an error naming the line.
pub fn parse_companies<R: Read>(source: R, path: &Path) -> Result<Vec<CompanyRow>> {
    let mut rdr = reader(source);
    let headers = rdr.headers().map_err(|e| Error::parse(path, e))?.clone();
    let idx = column_indices(path, &headers, &COMPANY_COLUMNS)?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse(path, e))?;
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let revenue = match optional(field(5)) {
            None => None,
            Some(s) => Some(s.parse::<f64>().map_err(|_| Error::parse(path, format!("line {}: bad revenue `{s}`", line + 2)))?),
        };
        let employees = match optional(field(6)) {
            None => None,
            Some(s) => Some(s.parse::<u64>().map_err(|_| Error::parse(path, format!("line {}: bad employees `{s}`", line + 2)))?),
        };
        out.push(CompanyRow {
            company_id: field(0).to_string(),
            name: field(1).to_string(),
            sector: optional(field(2)),
            industry: optional(field(3)),
            country: optional(field(4)),
            revenue,
            employees,
            date_incorporated: optional(field(7)),
        });
    }
    Ok(out)
}

/// Director rows, with rows whose gender or age cannot be parsed replaced by
/// a diagnostic.
pub struct DirectorRows {
    pub rows: Vec<std::result::Result<RawDirectorRow, DiagnosticKind>>,
}

pub fn parse_directors<R: Read>(source: R, path: &Path) -> Result<DirectorRows> {
    let mut rdr = reader(source);
    let headers = rdr.headers().map_err(|e| Error::parse(path, e))?.clone();
    let idx = column_indices(path, &headers, &DIRECTOR_COLUMNS)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(path, e))?;
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let gender = Gender::from_code(field(2));
        let age_text = field(3).trim();
        let age = if age_text.is_empty() {
            Ok(None)
        } else if age_text.bytes().all(|b| b.is_ascii_digit()) {
            age_text.parse::<u32>().map(Some).map_err(|_| ())
        } else {
            Err(())
        };
        rows.push(match (gender, age) {
            (None, _) => Err(DiagnosticKind::InvalidGender(field(2).to_string())),
            (_, Err(())) => Err(DiagnosticKind::InvalidAge(age_text.to_string())),
            (Some(g), Ok(a)) => Ok(RawDirectorRow::new(field(0), field(1), g, a)),
        });
    }
    Ok(DirectorRows { rows })
}

/// Builds a corpus from parsed tables. Diagnostics and `row_directors` are
/// indexed by data row in the directors file.
pub fn build_corpus(companies: Vec<CompanyRow>, directors: DirectorRows) -> Result<Ingested> {
    let mut kept = Vec::new();
    let mut kept_at = Vec::new();
    let mut diagnostics = Vec::new();
    let total = directors.rows.len();
    for (i, row) in directors.rows.into_iter().enumerate() {
        match row {
            Ok(r) => {
                kept_at.push(i);
                kept.push(r);
            }
            Err(kind) => diagnostics.push(Diagnostic { row: i, kind }),
        }
    }
    let mut ing = Corpus::build(companies, kept)?;
    diagnostics.extend(ing.diagnostics.drain(..).map(|d| Diagnostic { row: kept_at[d.row], kind: d.kind }));
    diagnostics.sort_by_key(|d| d.row);
    let mut row_directors = vec![None; total];
    for (k, id) in ing.row_directors.iter().enumerate() {
        row_directors[kept_at[k]] = *id;
    }
    Ok(Ingested { corpus: ing.corpus, diagnostics, row_directors })
}

pub fn ingest_files(companies: &Path, directors: &Path) -> Result<Ingested> {
    let c = parse_companies(files::open(companies)?, companies)?;
    let d = parse_directors(files::open(directors)?, directors)?;
    build_corpus(c, d)
}

/// Director as stored in `corpus.json`: seats are company ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectorEntry {
    pub director_id: DirectorId,
    pub name: String,
    pub gender: Gender,
    pub age: Option<u32>,
    pub seats: Vec<String>,
    pub inferred_country: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub companies: Vec<CompanyRecord>,
    pub directors: Vec<DirectorEntry>,
    pub missing_stats: MissingStats,
}

impl CorpusFile {
    pub fn from_corpus(c: &Corpus) -> CorpusFile {
        let directors = c
            .directors
            .iter()
            .map(|d| DirectorEntry {
                director_id: d.director_id,
                name: d.name.clone(),
                gender: d.gender,
                age: d.age,
                seats: d.seats.iter().map(|&s| c.companies[s as usize].company_id.clone()).collect(),
                inferred_country: d.inferred_country.clone(),
            })
            .collect();
        CorpusFile { companies: c.companies.clone(), directors, missing_stats: c.missing_stats.clone() }
    }

    pub fn into_corpus(self, path: &Path) -> Result<Corpus> {
        let index = |id: &str| {
            self.companies
                .binary_search_by(|c| c.company_id.as_str().cmp(id))
                .map(|i| i as u32)
                .map_err(|_| Error::parse(path, format!("seat references unknown company `{id}`")))
        };
        let mut directors = Vec::with_capacity(self.directors.len());
        for d in &self.directors {
            let mut seats = d.seats.iter().map(|s| index(s)).collect::<Result<Vec<u32>>>()?;
            seats.sort_unstable();
            directors.push(DirectorRecord {
                director_id: d.director_id,
                name: d.name.clone(),
                gender: d.gender,
                age: d.age,
                seats,
                inferred_country: d.inferred_country.clone(),
            });
        }
        Ok(Corpus::from_parts(self.companies, directors)?)
    }
}

pub fn write_corpus(path: &Path, c: &Corpus) -> Result<()> {
    files::write_json(path, &CorpusFile::from_corpus(c), false)
}

pub fn read_corpus(path: &Path) -> Result<Corpus> {
    files::read_json::<CorpusFile>(path)?.into_corpus(path)
}

/// Row-level outcome of an ingest run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows: usize,
    pub rejected: usize,
    pub collapsed: usize,
    pub flagged: usize,
    pub diagnostics: Vec<Diagnostic>,
    /// Director id of every data row; `null` for rejected rows.
    pub row_directors: Vec<Option<DirectorId>>,
}

impl IngestReport {
    pub fn new(ing: &Ingested) -> IngestReport {
        let count = |f: fn(&DiagnosticKind) -> bool| ing.diagnostics.iter().filter(|d| f(&d.kind)).count();
        IngestReport {
            rows: ing.row_directors.len(),
            rejected: ing.rejected_rows(),
            collapsed: count(|k| matches!(k, DiagnosticKind::DuplicateSeat)),
            flagged: count(|k| matches!(k, DiagnosticKind::ImplausibleAge(_))),
            diagnostics: ing.diagnostics.clone(),
            row_directors: ing.row_directors.clone(),
        }
    }
}
