use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use interlock::error::Result;
use interlock::ingest::{self, DirectorRows};
use interlock::pipeline::{self, BetweennessKind, Overrides, PipelineConfig, ReportBundle};
use interlock::synth::{self, SynthSpec};
use interlock::{files, render, stages};
use interlock_core::metrics::BetweennessMode;
use interlock_core::nullmodel::{NullModelOptions, SeatDenominator};

#[derive(Parser)]
#[command(name = "interlock", version, about = "Gender analysis of board-interlock networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read company and director tables into corpus.json.
    Ingest {
        #[arg(long)]
        companies: PathBuf,
        #[arg(long)]
        directors: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-row diagnostics and identity assignments.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Project the director-company graph onto directors.
    Project {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_name = "PATH")]
        export_edgelist: Option<PathBuf>,
    },
    /// Network metrics for the whole graph and each gender.
    Metrics {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        betweenness: BetweennessKind,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        per_node: Option<PathBuf>,
    },
    /// Predicted versus observed share of boards with a woman.
    Nullmodel {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        by_country: bool,
        /// Monte Carlo trials per scope; analytic values only when absent.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Estimate p from seats of directors with a recorded gender only.
        #[arg(long)]
        gendered_only: bool,
        #[arg(long, value_name = "PATH")]
        plot_data: Option<PathBuf>,
    },
    /// Descriptive statistics and hypothesis tests.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_name = "DIR")]
        plot_data: Option<PathBuf>,
        #[arg(long, default_value_t = interlock_core::stats::DEFAULT_MIN_AGE)]
        min_age: u32,
    },
    /// Generate a seeded synthetic corpus and its ground-truth ledger.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ledger: PathBuf,
        /// Also write companies.csv and directors.csv here.
        #[arg(long, value_name = "DIR")]
        csv_dir: Option<PathBuf>,
    },
    /// Run every stage and write the report bundle.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        companies: Option<PathBuf>,
        #[arg(long)]
        directors: Option<PathBuf>,
        #[arg(long)]
        synth_spec: Option<PathBuf>,
        #[arg(long, value_enum)]
        betweenness: Option<BetweennessKind>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        by_country: Option<bool>,
        #[arg(long)]
        gendered_only: Option<bool>,
        #[arg(long)]
        min_age: Option<u32>,
    },
    /// Print the tables of a bundle.
    Render {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest { companies, directors, out, report } => {
            let r = stages::ingest(&companies, &directors, &out, report.as_deref())?;
            eprintln!("{} rows, {} rejected, {} collapsed, {} flagged", r.rows, r.rejected, r.collapsed, r.flagged);
        }
        Command::Project { corpus, out, export_edgelist } => {
            let s = stages::project_graph(&corpus, &out, export_edgelist.as_deref())?;
            eprintln!("{} nodes, {} edges", s.nodes, s.edges);
        }
        Command::Metrics { graph, out, betweenness, samples, seed, per_node } => {
            let mode = match betweenness {
                BetweennessKind::Exact => BetweennessMode::Exact,
                BetweennessKind::Sampled => BetweennessMode::Sampled { k: samples, seed },
            };
            stages::metrics(&graph, mode, &out, per_node.as_deref())?;
        }
        Command::Nullmodel { corpus, out, by_country, trials, seed, gendered_only, plot_data } => {
            let opts = NullModelOptions {
                denominator: if gendered_only { SeatDenominator::GenderedOnly } else { SeatDenominator::AllSeats },
                by_country,
                monte_carlo: trials.map(|t| (t, seed)),
            };
            stages::nullmodel(&corpus, &opts, &out, plot_data.as_deref())?;
        }
        Command::Stats { corpus, metrics, out, plot_data, min_age } => {
            let r = stages::stats(&corpus, &metrics, min_age, &out, plot_data.as_deref())?;
            for note in &r.notes {
                eprintln!("note: {note}");
            }
        }
        Command::Synth { spec, out, ledger, csv_dir } => {
            let generated = synth::synth_corpus(&SynthSpec::load(&spec)?)?;
            if let Some(dir) = &csv_dir {
                synth::write_csvs(dir, &generated)?;
            }
            let rows = DirectorRows { rows: generated.directors.iter().cloned().map(Ok).collect() };
            let ing = ingest::build_corpus(generated.companies.clone(), rows)?;
            ingest::write_corpus(&out, &ing.corpus)?;
            files::write_json(&ledger, &generated.ledger, false)?;
        }
        Command::Run {
            config,
            out_dir,
            companies,
            directors,
            synth_spec,
            betweenness,
            samples,
            seed,
            trials,
            by_country,
            gendered_only,
            min_age,
        } => {
            let mut cfg = match &config {
                Some(path) => PipelineConfig::load(path)?,
                None => PipelineConfig::default(),
            };
            cfg.apply(Overrides {
                companies,
                directors,
                synth_spec,
                betweenness,
                samples,
                seed,
                trials,
                by_country,
                gendered_only,
                min_age,
            });
            pipeline::run(&cfg, &out_dir)?;
            let text = std::fs::read_to_string(out_dir.join(pipeline::TABLES_TEXT_FILE))
                .map_err(|e| interlock::Error::io(&out_dir, e))?;
            print!("{text}");
        }
        Command::Render { bundle, csv } => {
            let b: ReportBundle = files::read_json(&bundle)?;
            let rows = render::render_tables(&b.table1, &b.table2)?;
            print!("{}", render::to_text(&rows));
            if let Some(path) = csv {
                files::write_string(&path, &render::to_csv(&rows))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
