//! JSON and CSV artifacts written between stages.

use std::path::Path;

use interlock_core::corpus::{Gender, MissingStats};
use interlock_core::metrics::NodeMetrics;
use interlock_core::nullmodel::NullModelResult;
use interlock_core::stats::{AgeAnalysis, MultiDirectorship, ProportionRow, SectorIndustryRow};
use interlock_core::{GraphMetrics, TestResult};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files;

/// Per-node metrics stored column-wise.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeColumns {
    pub director_id: Vec<u32>,
    pub gender: Vec<Gender>,
    pub degree: Vec<u32>,
    pub like_degree: Vec<Option<u32>>,
    pub betweenness: Vec<f64>,
    pub harmonic_closeness: Vec<f64>,
    pub clustering: Vec<Option<f64>>,
    pub component_id: Vec<u32>,
    pub in_largest: Vec<bool>,
}

impl NodeColumns {
    pub fn from_nodes(nodes: &[NodeMetrics]) -> NodeColumns {
        let mut c = NodeColumns::default();
        for m in nodes {
            c.director_id.push(m.director_id);
            c.gender.push(m.gender);
            c.degree.push(m.degree);
            c.like_degree.push(m.like_degree);
            c.betweenness.push(m.betweenness);
            c.harmonic_closeness.push(m.harmonic_closeness);
            c.clustering.push(m.clustering);
            c.component_id.push(m.component_id);
            c.in_largest.push(m.in_largest);
        }
        c
    }

    pub fn to_nodes(&self, path: &Path) -> Result<Vec<NodeMetrics>> {
        let n = self.director_id.len();
        let lens = [
            self.gender.len(),
            self.degree.len(),
            self.like_degree.len(),
            self.betweenness.len(),
            self.harmonic_closeness.len(),
            self.clustering.len(),
            self.component_id.len(),
            self.in_largest.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::parse(path, "per-node columns have different lengths"));
        }
        Ok((0..n)
            .map(|i| NodeMetrics {
                director_id: self.director_id[i],
                gender: self.gender[i],
                degree: self.degree[i],
                like_degree: self.like_degree[i],
                betweenness: self.betweenness[i],
                harmonic_closeness: self.harmonic_closeness[i],
                clustering: self.clustering[i],
                component_id: self.component_id[i],
                in_largest: self.in_largest[i],
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    #[serde(flatten)]
    pub metrics: GraphMetrics,
    pub nodes: NodeColumns,
}

pub const NODE_CSV_COLUMNS: [&str; 8] =
    ["director_id", "gender", "degree", "like_degree", "betweenness", "harmonic_closeness", "clustering", "component_id"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_node_csv(path: &Path, nodes: &[NodeMetrics]) -> Result<()> {
    let mut w = files::csv_writer(path, &NODE_CSV_COLUMNS)?;
    for m in nodes {
        w.write_record([
            m.director_id.to_string(),
            m.gender.code().to_string(),
            m.degree.to_string(),
            opt(m.like_degree),
            m.betweenness.to_string(),
            m.harmonic_closeness.to_string(),
            opt(m.clustering),
            m.component_id.to_string(),
        ])
        .map_err(|e| Error::parse(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub const FIG2_COLUMNS: [&str; 3] = ["sector", "industry", "proportion"];
pub const FIG3_COLUMNS: [&str; 2] = ["country", "proportion"];
pub const FIG4_COLUMNS: [&str; 3] = ["country", "observed", "predicted"];
pub const FIG5_COLUMNS: [&str; 5] = ["age", "count_male", "count_female", "fitted_male", "fitted_female"];

fn write_rows<I: IntoIterator<Item = Vec<String>>>(path: &Path, header: &[&str], rows: I) -> Result<usize> {
    let mut w = files::csv_writer(path, header)?;
    let mut n = 0;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::parse(path, e))?;
        n += 1;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(n)
}

/// Sector rows carry an empty industry field.
pub fn write_fig2(path: &Path, rows: &[SectorIndustryRow]) -> Result<usize> {
    write_rows(
        path,
        &FIG2_COLUMNS,
        rows.iter().map(|r| vec![r.sector.clone(), r.industry.clone().unwrap_or_default(), r.proportion.to_string()]),
    )
}

pub fn write_fig3(path: &Path, rows: &[ProportionRow]) -> Result<usize> {
    write_rows(path, &FIG3_COLUMNS, rows.iter().map(|r| vec![r.key.clone(), r.seat_proportion.to_string()]))
}

/// Country rows only; the global row is left out.
pub fn write_fig4(path: &Path, results: &[NullModelResult]) -> Result<usize> {
    write_rows(
        path,
        &FIG4_COLUMNS,
        results.iter().filter(|r| r.scope != interlock_core::nullmodel::Scope::Global).map(|r| {
            vec![
                r.scope.label().to_string(),
                r.observed_fraction_with_women.to_string(),
                r.predicted_fraction_with_women.to_string(),
            ]
        }),
    )
}

/// Header only when no age analysis was possible.
pub fn write_fig5(path: &Path, age: Option<&AgeAnalysis>) -> Result<usize> {
    write_rows(
        path,
        &FIG5_COLUMNS,
        age.into_iter().flat_map(|a| &a.histogram).map(|r| {
            vec![
                r.age.to_string(),
                r.count_male.to_string(),
                r.count_female.to_string(),
                r.fitted_male.to_string(),
                r.fitted_female.to_string(),
            ]
        }),
    )
}

/// Female share of seats versus directors within one scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub scope: String,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub seats: u64,
    pub directors: u64,
    pub female_seat_share: f64,
    pub female_director_share: f64,
    pub by_country: Vec<ProportionRow>,
    pub by_sector: Vec<ProportionRow>,
    pub by_industry: Vec<ProportionRow>,
    pub sector_industry: Vec<SectorIndustryRow>,
    pub seat_director_gap: Vec<GapRow>,
    pub multi_directorship: MultiDirectorship,
    pub age: Option<AgeAnalysis>,
    pub log_degree_test: Option<TestResult>,
    pub log_betweenness_test: Option<TestResult>,
    pub largest_component_test: Option<TestResult>,
    pub missing: MissingStats,
    /// Why any of the optional results above is absent.
    pub notes: Vec<String>,
}
