use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use carare_edm::config::RunConfig;
use carare_edm::mint::{mint_aggregation_uri, mint_landing_page_uri, MintConfig};
use carare_edm::pipeline::{DirSources, Pipeline, RunOptions};
use carare_edm::rdf::{DirSink, MemorySink, OutputSink};
use carare_edm::report::{peak_rss_kb, BatchReport};
use clap::{Parser, Subcommand};

/// Convert CARARE monument records into EDM RDF/XML.
#[derive(Parser)]
#[command(name = "carare2edm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole pipeline and write RDF/XML plus a report.
    Transform {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (1 = single-threaded).
        #[arg(long)]
        workers: Option<usize>,
        /// Process everything but write no files.
        #[arg(long)]
        dry_run: bool,
    },
    /// Parse, map and validate; write only the report.
    ValidateOnly {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the identifier minted for a record/entity pair.
    Mint {
        #[arg(long)]
        record_id: String,
        #[arg(long)]
        entity_id: String,
        /// Print the landing-page URL instead of the aggregation URI.
        #[arg(long)]
        landing: bool,
        /// Take base URI and version from this run configuration.
        #[arg(long, conflicts_with_all = ["base_uri", "version"])]
        config: Option<PathBuf>,
        #[arg(long, default_value = "http://store.carare.eu")]
        base_uri: String,
        #[arg(long)]
        version: Option<u32>,
    },
}

/// Failures that stop a run before it completes.
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Transform { config, workers, dry_run } => batch(&config, workers, !dry_run, !dry_run),
        Command::ValidateOnly { config, workers } => batch(&config, workers, false, true),
        Command::Mint { record_id, entity_id, landing, config, base_uri, version } => {
            let mint = match config {
                Some(path) => RunConfig::load(&path)?.profile.mint,
                None => MintConfig::new(base_uri, version)?,
            };
            let uri = if landing {
                mint_landing_page_uri(&mint, &record_id, &entity_id)?
            } else {
                mint_aggregation_uri(&mint, &record_id, &entity_id)?
            };
            println!("{uri}");
            Ok(0)
        }
    }
}

fn batch(config_path: &Path, workers: Option<usize>, write_rdf: bool, write_report: bool) -> Result<u8> {
    let cfg = RunConfig::load(config_path)?;
    let sources = DirSources::scan(&cfg.input_dir)
        .with_context(|| format!("cannot read input directory {}", cfg.input_dir.display()))?;
    let mut options = RunOptions { layout: cfg.layout, write_output: write_rdf, ..RunOptions::default() };
    if let Some(n) = workers.or(cfg.workers) {
        anyhow::ensure!(n > 0, "--workers must be at least 1");
        options.workers = n;
    }

    let mut sink: Box<dyn OutputSink> = if write_rdf {
        Box::new(DirSink::new(&cfg.output_dir).with_context(|| format!("cannot create {}", cfg.output_dir.display()))?)
    } else {
        Box::new(MemorySink::default())
    };
    let mut report = Pipeline::new(&cfg.profile, &cfg.parser, options).run(&sources, sink.as_mut())?;
    report.peak_rss_kb = peak_rss_kb();

    if write_report {
        write_report_file(&cfg.report_path, &report)?;
    }
    println!("{report}");
    Ok(report.exit_code() as u8)
}

fn write_report_file(path: &Path, report: &BatchReport) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let file = fs::File::create(path).with_context(|| format!("cannot write report {}", path.display()))?;
    let mut out = BufWriter::new(file);
    report.write_jsonl(&mut out)?;
    out.flush()?;
    Ok(())
}
