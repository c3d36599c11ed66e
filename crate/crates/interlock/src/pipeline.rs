//! End-to-end runs driven by a flat TOML config, and the report bundle that
//! ties every artifact of a run together.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use interlock_core::metrics::{BetweennessMode, Strata, StratumSummary, SubgraphSummary};
use interlock_core::nullmodel::{NullModelOptions, NullModelResult, Scope, SeatDenominator};
use serde::{Deserialize, Serialize};

use crate::artifacts::StatsReport;
use crate::error::{Error, Result};
use crate::files;
use crate::render;
use crate::stages::{self, FIG2_FILE, FIG3_FILE, FIG4_FILE, FIG5_FILE};
use crate::synth::{self, SynthSpec};

pub const CORPUS_FILE: &str = "corpus.json";
pub const INGEST_REPORT_FILE: &str = "ingest_report.json";
pub const GRAPH_FILE: &str = "graph.bin";
pub const EDGELIST_FILE: &str = "edges.txt";
pub const METRICS_FILE: &str = "metrics.json";
pub const NODES_FILE: &str = "nodes.csv";
pub const NULLMODEL_FILE: &str = "nullmodel.json";
pub const STATS_FILE: &str = "stats.json";
pub const PLOTS_DIR: &str = "plots";
pub const BUNDLE_FILE: &str = "bundle.json";
pub const TABLES_TEXT_FILE: &str = "tables.txt";
pub const TABLES_CSV_FILE: &str = "tables.csv";
pub const SYNTH_DIR: &str = "synthetic";
pub const LEDGER_FILE: &str = "ledger.json";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BetweennessKind {
    #[default]
    Exact,
    Sampled,
}

fn default_samples() -> usize {
    10_000
}

fn default_true() -> bool {
    true
}

fn default_min_age() -> u32 {
    interlock_core::stats::DEFAULT_MIN_AGE
}

/// Pipeline settings. Relative paths are resolved against the directory of
/// the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub companies: Option<PathBuf>,
    #[serde(default)]
    pub directors: Option<PathBuf>,
    /// Generate the input tables from this spec instead of reading them.
    #[serde(default)]
    pub synth_spec: Option<PathBuf>,
    #[serde(default)]
    pub betweenness: BetweennessKind,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Monte Carlo trials for the null model; none when zero.
    #[serde(default)]
    pub trials: u64,
    #[serde(default = "default_true")]
    pub by_country: bool,
    #[serde(default)]
    pub gendered_only: bool,
    #[serde(default = "default_min_age")]
    pub min_age: u32,
    #[serde(default)]
    pub per_node: bool,
    #[serde(default)]
    pub export_edgelist: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        toml::from_str("").expect("every field has a default")
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub companies: Option<PathBuf>,
    pub directors: Option<PathBuf>,
    pub synth_spec: Option<PathBuf>,
    pub betweenness: Option<BetweennessKind>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub by_country: Option<bool>,
    pub gendered_only: Option<bool>,
    pub min_age: Option<u32>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: PipelineConfig = toml::from_str(&text).map_err(|e| Error::parse(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.companies, &mut cfg.directors, &mut cfg.synth_spec].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) {
        if o.synth_spec.is_some() {
            self.synth_spec = o.synth_spec;
        }
        if o.companies.is_some() {
            self.companies = o.companies;
        }
        if o.directors.is_some() {
            self.directors = o.directors;
        }
        self.betweenness = o.betweenness.unwrap_or(self.betweenness);
        self.samples = o.samples.unwrap_or(self.samples);
        self.seed = o.seed.unwrap_or(self.seed);
        self.trials = o.trials.unwrap_or(self.trials);
        self.by_country = o.by_country.unwrap_or(self.by_country);
        self.gendered_only = o.gendered_only.unwrap_or(self.gendered_only);
        self.min_age = o.min_age.unwrap_or(self.min_age);
    }

    pub fn betweenness_mode(&self) -> BetweennessMode {
        match self.betweenness {
            BetweennessKind::Exact => BetweennessMode::Exact,
            BetweennessKind::Sampled => BetweennessMode::Sampled { k: self.samples, seed: self.seed },
        }
    }

    pub fn nullmodel_options(&self) -> NullModelOptions {
        NullModelOptions {
            denominator: if self.gendered_only { SeatDenominator::GenderedOnly } else { SeatDenominator::AllSeats },
            by_country: self.by_country,
            monte_carlo: (self.trials > 0).then_some((self.trials, self.seed)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub betweenness: BetweennessMode,
    pub trials: u64,
    pub by_country: bool,
    pub gendered_only: bool,
    pub min_age: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of each input, keyed by file name.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub synth_seed: Option<u64>,
    pub settings: Settings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureEntry {
    pub figure: String,
    /// Path relative to the output directory.
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub tool_version: String,
    pub provenance: Provenance,
    pub table1: Strata<SubgraphSummary>,
    pub table2: Strata<StratumSummary>,
    pub figures: Vec<FigureEntry>,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Row count of every figure's source table.
fn expected_rows(stats: &StatsReport, null: &[NullModelResult]) -> [(&'static str, &'static str, usize); 4] {
    [
        ("fig2", FIG2_FILE, stats.sector_industry.len()),
        ("fig3", FIG3_FILE, stats.by_country.len()),
        ("fig4", FIG4_FILE, null.iter().filter(|r| r.scope != Scope::Global).count()),
        ("fig5", FIG5_FILE, stats.age.as_ref().map_or(0, |a| a.histogram.len())),
    ]
}

/// Runs every stage, writing all artifacts under `out_dir`.
pub fn run(cfg: &PipelineConfig, out_dir: &Path) -> Result<ReportBundle> {
    let out = |name: &str| out_dir.join(name);
    let mut inputs = BTreeMap::new();
    let mut synth_seed = None;
    let (companies, directors) = match &cfg.synth_spec {
        Some(spec_path) => {
            let spec = stage("synth", SynthSpec::load(spec_path))?;
            let generated = stage("synth", synth::synth_corpus(&spec))?;
            let dir = out(SYNTH_DIR);
            stage("synth", synth::write_csvs(&dir, &generated))?;
            stage("synth", files::write_json(&dir.join(LEDGER_FILE), &generated.ledger, false))?;
            inputs.insert(file_name(spec_path), files::sha256_hex(spec_path)?);
            synth_seed = Some(spec.seed);
            (dir.join("companies.csv"), dir.join("directors.csv"))
        }
        None => match (&cfg.companies, &cfg.directors) {
            (Some(c), Some(d)) => (c.clone(), d.clone()),
            _ => return Err(Error::Config("either synth_spec or both companies and directors are required".into())),
        },
    };
    for p in [&companies, &directors] {
        inputs.insert(file_name(p), files::sha256_hex(p)?);
    }

    stage("ingest", stages::ingest(&companies, &directors, &out(CORPUS_FILE), Some(&out(INGEST_REPORT_FILE))))?;
    let edgelist = cfg.export_edgelist.then(|| out(EDGELIST_FILE));
    stage("project", stages::project_graph(&out(CORPUS_FILE), &out(GRAPH_FILE), edgelist.as_deref()))?;
    let per_node = cfg.per_node.then(|| out(NODES_FILE));
    let metrics =
        stage("metrics", stages::metrics(&out(GRAPH_FILE), cfg.betweenness_mode(), &out(METRICS_FILE), per_node.as_deref()))?;
    let plots = out(PLOTS_DIR);
    let null = stage(
        "nullmodel",
        stages::nullmodel(&out(CORPUS_FILE), &cfg.nullmodel_options(), &out(NULLMODEL_FILE), Some(&plots.join(FIG4_FILE))),
    )?;
    let stats =
        stage("stats", stages::stats(&out(CORPUS_FILE), &out(METRICS_FILE), cfg.min_age, &out(STATS_FILE), Some(&plots)))?;

    let mut figures = Vec::new();
    for (figure, name, rows) in expected_rows(&stats, &null) {
        figures.push(FigureEntry {
            figure: figure.to_string(),
            file: format!("{PLOTS_DIR}/{name}"),
            rows,
            sha256: files::sha256_hex(&plots.join(name))?,
        });
    }
    let bundle = ReportBundle {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        provenance: Provenance {
            inputs,
            seed: cfg.seed,
            synth_seed,
            settings: Settings {
                betweenness: metrics.betweenness,
                trials: cfg.trials,
                by_country: cfg.by_country,
                gendered_only: cfg.gendered_only,
                min_age: cfg.min_age,
            },
        },
        table1: metrics.table1,
        table2: metrics.table2,
        figures,
    };
    stage("render", render_bundle(&bundle, out_dir))?;
    files::write_json(&out(BUNDLE_FILE), &bundle, true)?;
    Ok(bundle)
}

/// Writes `tables.txt` and `tables.csv` next to the bundle.
pub fn render_bundle(bundle: &ReportBundle, out_dir: &Path) -> Result<()> {
    let rows = render::render_tables(&bundle.table1, &bundle.table2)?;
    files::write_string(&out_dir.join(TABLES_TEXT_FILE), &render::to_text(&rows))?;
    files::write_string(&out_dir.join(TABLES_CSV_FILE), &render::to_csv(&rows))
}

/// Checks that every figure file exists, matches its recorded hash, and has
/// as many rows as its source table.
pub fn verify_bundle(bundle: &ReportBundle, out_dir: &Path) -> Result<()> {
    let stats: StatsReport = files::read_json(&out_dir.join(STATS_FILE))?;
    let null: Vec<NullModelResult> = files::read_json(&out_dir.join(NULLMODEL_FILE))?;
    let expected = expected_rows(&stats, &null);
    for entry in &bundle.figures {
        let path = out_dir.join(&entry.file);
        if files::sha256_hex(&path)? != entry.sha256 {
            return Err(Error::parse(&path, "hash does not match the bundle"));
        }
        let rows = csv::Reader::from_path(&path).map_err(|e| Error::parse(&path, e))?.records().count();
        let source = expected.iter().find(|e| e.0 == entry.figure).map(|e| e.2);
        if rows != entry.rows || source != Some(rows) {
            return Err(Error::parse(&path, format!("{rows} rows, bundle says {}, source table {source:?}", entry.rows)));
        }
    }
    Ok(())
}
