//! One function per pipeline stage. Every stage reads its inputs from files
//! and writes its outputs to files, so stages can be run and re-run
//! independently.

use std::path::Path;

use interlock_core::corpus::{Corpus, Gender};
use interlock_core::graph::{project, BipartiteGraph};
use interlock_core::metrics::{metrics_report, BetweennessMode};
use interlock_core::nullmodel::{country_null_report, NullModelOptions, NullModelResult, Scope};
use interlock_core::stats::{
    age_analysis, largest_component_test, log_centrality_tests, multi_directorship_rates, proportions_by,
    seat_vs_director_gap, sector_industry_rows, GroupKey,
};
use interlock_core::GraphMetrics;

use crate::artifacts::{self, GapRow, MetricsFile, NodeColumns, StatsReport};
use crate::error::Result;
use crate::graphfile::{self, GraphSidecar};
use crate::ingest::{self, IngestReport};
use crate::files;

pub fn ingest(companies: &Path, directors: &Path, out: &Path, report: Option<&Path>) -> Result<IngestReport> {
    let ing = ingest::ingest_files(companies, directors)?;
    ingest::write_corpus(out, &ing.corpus)?;
    let summary = IngestReport::new(&ing);
    if let Some(path) = report {
        files::write_json(path, &summary, false)?;
    }
    Ok(summary)
}

pub fn project_graph(corpus: &Path, out: &Path, edgelist: Option<&Path>) -> Result<GraphSidecar> {
    let corpus = ingest::read_corpus(corpus)?;
    let pg = project(&BipartiteGraph::from_corpus(&corpus));
    let sidecar = graphfile::write_graph(out, &pg)?;
    if let Some(path) = edgelist {
        graphfile::export_edgelist(path, &pg)?;
    }
    Ok(sidecar)
}

/// Sampling more sources than there are nodes falls back to using every
/// node once, which equals the exact computation.
pub fn effective_mode(mode: BetweennessMode, n: usize) -> BetweennessMode {
    match mode {
        BetweennessMode::Sampled { k, seed } if k > n => BetweennessMode::Sampled { k: n, seed },
        m => m,
    }
}

pub fn metrics(graph: &Path, mode: BetweennessMode, out: &Path, per_node: Option<&Path>) -> Result<GraphMetrics> {
    let pg = graphfile::read_graph(graph)?;
    let report = metrics_report(&pg, effective_mode(mode, pg.n()))?;
    let file = MetricsFile { metrics: report.metrics, nodes: NodeColumns::from_nodes(&report.nodes) };
    files::write_json(out, &file, false)?;
    if let Some(path) = per_node {
        artifacts::write_node_csv(path, &report.nodes)?;
    }
    Ok(file.metrics)
}

pub fn read_metrics(path: &Path) -> Result<MetricsFile> {
    files::read_json(path)
}

pub fn nullmodel(corpus: &Path, opts: &NullModelOptions, out: &Path, fig4: Option<&Path>) -> Result<Vec<NullModelResult>> {
    let corpus = ingest::read_corpus(corpus)?;
    let results = country_null_report(&corpus, opts)?;
    files::write_json(out, &results, true)?;
    if let Some(path) = fig4 {
        artifacts::write_fig4(path, &results)?;
    }
    Ok(results)
}

pub const FIG2_FILE: &str = "fig2_sector.csv";
pub const FIG3_FILE: &str = "fig3_country.csv";
pub const FIG4_FILE: &str = "fig4.csv";
pub const FIG5_FILE: &str = "fig5_age.csv";

pub fn stats_report(corpus: &Corpus, metrics: &MetricsFile, metrics_path: &Path, min_age: u32) -> Result<StatsReport> {
    let mut notes = Vec::new();
    fn keep<T>(notes: &mut Vec<String>, what: &str, r: interlock_core::Result<T>) -> Option<T> {
        r.map_err(|e| notes.push(format!("{what}: {e}"))).ok()
    }
    let nodes = metrics.nodes.to_nodes(metrics_path)?;
    let (log_degree_test, log_betweenness_test) = match keep(&mut notes, "log centrality tests", log_centrality_tests(&nodes)) {
        Some((d, b)) => (Some(d), Some(b)),
        None => (None, None),
    };
    let largest_component_test = keep(&mut notes, "largest component test", largest_component_test(&nodes));
    let age = keep(&mut notes, "age analysis", age_analysis(corpus, min_age));

    let mut seat_director_gap = Vec::new();
    for scope in std::iter::once(Scope::Global).chain(corpus.countries().into_iter().map(|c| Scope::Country(c.to_string()))) {
        if let Ok(gap) = seat_vs_director_gap(corpus, &scope) {
            seat_director_gap.push(GapRow { scope: scope.label().to_string(), gap });
        }
    }
    let seats = corpus.total_seats() as u64;
    let female_seats =
        corpus.companies.iter().flat_map(|c| &c.board).filter(|&&d| corpus.gender_of(d) == Gender::Female).count();
    let female_directors = corpus.directors.iter().filter(|d| d.gender == Gender::Female).count();
    let share = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(StatsReport {
        seats,
        directors: corpus.directors.len() as u64,
        female_seat_share: share(female_seats, seats as usize),
        female_director_share: share(female_directors, corpus.directors.len()),
        by_country: proportions_by(corpus, GroupKey::Country),
        by_sector: proportions_by(corpus, GroupKey::Sector),
        by_industry: proportions_by(corpus, GroupKey::Industry),
        sector_industry: sector_industry_rows(corpus),
        seat_director_gap,
        multi_directorship: multi_directorship_rates(corpus),
        age,
        log_degree_test,
        log_betweenness_test,
        largest_component_test,
        missing: corpus.missing_stats.clone(),
        notes,
    })
}

pub fn stats(corpus: &Path, metrics: &Path, min_age: u32, out: &Path, plot_dir: Option<&Path>) -> Result<StatsReport> {
    let corpus = ingest::read_corpus(corpus)?;
    let metrics_file = read_metrics(metrics)?;
    let report = stats_report(&corpus, &metrics_file, metrics, min_age)?;
    files::write_json(out, &report, true)?;
    if let Some(dir) = plot_dir {
        artifacts::write_fig2(&dir.join(FIG2_FILE), &report.sector_industry)?;
        artifacts::write_fig3(&dir.join(FIG3_FILE), &report.by_country)?;
        artifacts::write_fig5(&dir.join(FIG5_FILE), report.age.as_ref())?;
    }
    Ok(report)
}
