//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use tiedecay_core::aggregate::aggregate_weights;
use tiedecay_core::event_stream::exclude_low_degree_nodes;
use tiedecay_core::{EventStream, ParseOptions};

use crate::config::{summary_path, ConfigValues, ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::experiments::{self, ensemble_member, Record};
use crate::io::{read_stream, write_aggregate_edges, write_stream};

/// Spectral-gap experiments on tie-decay networks built from contact streams.
#[derive(Debug, Parser)]
#[command(name = "tiedecay", version)]
pub struct Args {
    /// Event file with one `time node node` line per contact.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// ensemble | alpha-sweep | time-series | aggregate-compare
    #[arg(long)]
    pub mode: Option<String>,
    /// Comma-separated decay rates.
    #[arg(long, value_name = "A[,A...]")]
    pub alpha: Option<String>,
    /// Log-spaced decay-rate grid.
    #[arg(long, value_name = "LO:HI:POINTS")]
    pub alpha_grid: Option<String>,
    /// is | sts | rt | res | all, or a comma-separated list of codes.
    #[arg(long)]
    pub method: Option<String>,
    /// Randomized streams per method.
    #[arg(long, value_name = "N")]
    pub ensemble: Option<String>,
    /// Base seed for randomizations.
    #[arg(long, value_name = "S")]
    pub seed: Option<String>,
    /// Drop nodes with fewer than K distinct neighbours (repeated until stable).
    #[arg(long, value_name = "K")]
    pub min_edges: Option<String>,
    /// Treat contacts as directed.
    #[arg(long)]
    pub directed: bool,
    /// Reject input lines with more than three columns.
    #[arg(long)]
    pub strict: bool,
    /// Record CSV path; ensemble summaries go next to it as `<name>_summary.csv`.
    /// Records go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write randomized streams (ensemble) or aggregate edge lists
    /// (aggregate-compare) into this directory.
    #[arg(long, value_name = "DIR")]
    pub export_dir: Option<PathBuf>,
    /// key=value file with defaults for any of the flags above.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl Args {
    fn values(&self) -> ConfigValues {
        ConfigValues {
            input: self.input.clone(),
            mode: self.mode.clone(),
            alpha: self.alpha.clone(),
            alpha_grid: self.alpha_grid.clone(),
            method: self.method.clone(),
            ensemble: self.ensemble.clone(),
            seed: self.seed.clone(),
            min_edges: self.min_edges.clone(),
            directed: self.directed.then_some(true),
            strict: self.strict.then_some(true),
            out: self.out.clone(),
            export_dir: self.export_dir.clone(),
        }
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => ConfigValues::read(path)?,
            None => ConfigValues::default(),
        };
        ExperimentConfig::from_values(base.merge(self.values()))
    }
}

pub fn run(args: &Args) -> Result<()> {
    execute(&args.resolve()?)
}

pub fn load_input(config: &ExperimentConfig) -> Result<EventStream> {
    let options = ParseOptions { directed: config.directed, allow_extra_columns: !config.strict, time_resolution: None };
    let stream = read_stream(&config.input, options)?;
    if config.min_edges > 0 {
        return Ok(exclude_low_degree_nodes(&stream, config.min_edges)?);
    }
    Ok(stream)
}

pub fn execute(config: &ExperimentConfig) -> Result<()> {
    let stream = load_input(config)?;
    let alphas = &config.alphas;
    let mut summaries = None;
    let records: Vec<Record> = match config.mode {
        Mode::Ensemble => {
            let out = experiments::run_ensemble(&stream, alphas, &config.methods, config.ensemble, config.seed)?;
            summaries = Some(out.summaries);
            out.records
        }
        Mode::AlphaSweep => {
            experiments::run_alpha_sweep(&stream, alphas, &config.methods, config.ensemble, config.seed)?
        }
        Mode::TimeSeries => experiments::run_time_series(&stream, alphas)?,
        Mode::AggregateCompare => experiments::run_aggregate_compare(&stream, alphas)?,
    };

    match &config.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
            experiments::write_records(file, &records)?;
            if let Some(rows) = &summaries {
                let spath = summary_path(path);
                let file = fs::File::create(&spath).map_err(|e| Error::io(&spath, e))?;
                experiments::write_summaries(file, rows)?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            experiments::write_records(&mut lock, &records)?;
            lock.flush().map_err(|e| Error::io("<stdout>", e))?;
        }
    }

    if let Some(dir) = &config.export_dir {
        export(config, &stream, dir)?;
    }
    Ok(())
}

fn export(config: &ExperimentConfig, stream: &EventStream, dir: &PathBuf) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match config.mode {
        Mode::Ensemble => {
            for &method in &config.methods {
                for k in 0..config.ensemble as u64 {
                    let (seed, rs) = ensemble_member(stream, method, config.seed, k)?;
                    write_stream(&dir.join(format!("{}_{k}_{seed}.txt", method.code())), &rs)?;
                }
            }
        }
        Mode::AggregateCompare => {
            for &alpha in &config.alphas {
                if let Ok(agg) = aggregate_weights(stream, alpha) {
                    write_aggregate_edges(&dir.join(format!("aggregate_alpha_{alpha}.csv")), &agg, stream.is_directed())?;
                }
            }
        }
        Mode::AlphaSweep | Mode::TimeSeries => {}
    }
    Ok(())
}

/// One-line error report: `error[<kind>]: <message>`.
pub fn error_line(e: &Error) -> String {
    let message = e.to_string().replace('\n', " ");
    format!("error[{}]: {message}", e.kind())
}
