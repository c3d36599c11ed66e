//! Subgraph and node-attribute tables as text and CSV.

use std::fmt::Write as _;

use interlock_core::metrics::{Strata, StratumSummary, SubgraphSummary};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TABLE1_ROWS: [&str; 7] = [
    "edges",
    "diameter",
    "average path length",
    "density",
    "components",
    "% of nodes in the largest component",
    "% of edges in the largest component",
];

pub const TABLE2_ROWS: [&str; 15] = [
    "% of all",
    "% in the largest component",
    "maximum degree",
    "average degree",
    "average like degree",
    "average degree in largest component",
    "maximum betweenness centrality",
    "average betweenness centrality",
    "average betweenness centrality in largest component",
    "maximum closeness centrality",
    "average closeness centrality",
    "average closeness centrality in largest component",
    "maximum clustering coefficient",
    "average clustering coefficient",
    "average clustering coefficient in largest component",
];

pub const CSV_COLUMNS: [&str; 6] = ["table", "row", "all", "male", "female", "larger"];
pub const ABSENT: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Larger {
    Male,
    Female,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: u8,
    pub row: String,
    pub all: Option<f64>,
    pub male: Option<f64>,
    pub female: Option<f64>,
    /// Which gender column holds the larger value; `None` on ties or when
    /// either is absent.
    pub larger: Option<Larger>,
}

fn larger(male: Option<f64>, female: Option<f64>) -> Option<Larger> {
    match (male, female) {
        (Some(m), Some(f)) if m > f => Some(Larger::Male),
        (Some(m), Some(f)) if f > m => Some(Larger::Female),
        _ => None,
    }
}

/// The all-nodes stratum must be present; a gender stratum may be absent when
/// the network has no node of that gender.
fn rows_of<T>(
    table: u8,
    names: &[&str],
    strata: &Strata<T>,
    cells: impl Fn(&T) -> Vec<Option<f64>>,
) -> Result<Vec<TableRow>> {
    let all = strata.all.as_ref().ok_or_else(|| {
        Error::Config(format!("missing cell: table {table}, row `{}`, column `all`", names[0]))
    })?;
    let all = cells(all);
    let male = strata.male.as_ref().map(&cells);
    let female = strata.female.as_ref().map(&cells);
    Ok(names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let m = male.as_ref().and_then(|v| v[i]);
            let f = female.as_ref().and_then(|v| v[i]);
            TableRow { table, row: name.to_string(), all: all[i], male: m, female: f, larger: larger(m, f) }
        })
        .collect())
}

fn table1_cells(s: &SubgraphSummary) -> Vec<Option<f64>> {
    vec![
        Some(s.edges as f64),
        s.diameter.map(f64::from),
        s.avg_path_length,
        s.density,
        Some(s.components as f64),
        s.largest_node_fraction.map(|x| 100.0 * x),
        s.largest_edge_fraction.map(|x| 100.0 * x),
    ]
}

fn table2_cells(s: &StratumSummary) -> Vec<Option<f64>> {
    vec![
        Some(s.percent_of_all),
        Some(s.percent_in_largest),
        Some(f64::from(s.max_degree)),
        Some(s.mean_degree),
        s.mean_like_degree,
        s.mean_degree_in_largest,
        Some(s.max_betweenness),
        Some(s.mean_betweenness),
        s.mean_betweenness_in_largest,
        Some(s.max_closeness),
        Some(s.mean_closeness),
        s.mean_closeness_in_largest,
        s.max_clustering,
        s.mean_clustering,
        s.mean_clustering_in_largest,
    ]
}

/// Table 1 rows followed by Table 2 rows.
pub fn render_tables(table1: &Strata<SubgraphSummary>, table2: &Strata<StratumSummary>) -> Result<Vec<TableRow>> {
    let mut rows = rows_of(1, &TABLE1_ROWS, table1, table1_cells)?;
    rows.extend(rows_of(2, &TABLE2_ROWS, table2, table2_cells)?);
    Ok(rows)
}

fn cell_text(v: Option<f64>) -> String {
    match v {
        None => ABSENT.to_string(),
        Some(x) if x.fract() == 0.0 && x.abs() < 1e15 => format!("{x:.0}"),
        Some(x) => format!("{x:.4}"),
    }
}

/// Fixed-width text; the larger of the male and female values is marked `*`.
pub fn to_text(rows: &[TableRow]) -> String {
    let width = rows.iter().map(|r| r.row.len()).max().unwrap_or(0);
    let mut out = String::new();
    let mut current = 0;
    for r in rows {
        if r.table != current {
            if current != 0 {
                out.push('\n');
            }
            current = r.table;
            let _ = writeln!(out, "Table {}", r.table);
            let _ = writeln!(out, "{:width$}  {:>14}  {:>14}  {:>14}", "", "all", "male", "female");
        }
        let mark = |g: Larger, v: Option<f64>| {
            let star = if r.larger == Some(g) { "*" } else { "" };
            format!("{}{star}", cell_text(v))
        };
        let _ = writeln!(
            out,
            "{:width$}  {:>14}  {:>14}  {:>14}",
            r.row,
            cell_text(r.all),
            mark(Larger::Male, r.male),
            mark(Larger::Female, r.female)
        );
    }
    out
}

fn csv_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| ABSENT.to_string())
}

/// Full-precision CSV that [`parse_csv`] reads back exactly.
pub fn to_csv(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(CSV_COLUMNS);
    for r in rows {
        let larger = match r.larger {
            Some(Larger::Male) => "male",
            Some(Larger::Female) => "female",
            None => "",
        };
        let _ = w.write_record([
            r.table.to_string(),
            r.row.clone(),
            csv_cell(r.all),
            csv_cell(r.male),
            csv_cell(r.female),
            larger.to_string(),
        ]);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 input")
}

pub fn parse_csv(text: &str) -> std::result::Result<Vec<TableRow>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_COLUMNS) {
        return Err(format!("unexpected header {header:?}"));
    }
    let cell = |s: &str| -> std::result::Result<Option<f64>, String> {
        if s == ABSENT {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| format!("bad number `{s}`"))
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(TableRow {
            table: rec[0].parse().map_err(|_| format!("bad table `{}`", &rec[0]))?,
            row: rec[1].to_string(),
            all: cell(&rec[2])?,
            male: cell(&rec[3])?,
            female: cell(&rec[4])?,
            larger: match &rec[5] {
                "male" => Some(Larger::Male),
                "female" => Some(Larger::Female),
                "" => None,
                other => return Err(format!("bad larger flag `{other}`")),
            },
        });
    }
    Ok(rows)
}
