//! Experiment pipelines producing CSV-ready records.
//!
//! Every run returns its records in canonical order (method, alpha, seed,
//! time), so output does not depend on thread scheduling. Numbers are
//! written with Rust's `Display` for `f64`, the shortest decimal that
//! round-trips.

mod runs;
mod summary;

use std::fmt;
use std::io::Write;

pub use runs::{
    ensemble_member, flagged_intervals, gap_at, positive_slope_flags, run_aggregate_compare, run_alpha_sweep, run_ensemble,
    run_time_series, sweep_gaps, EnsembleOutput, ORIGINAL, SLOPE_DEAD_BAND,
};
pub use summary::{quantile_sorted, summary_stats, FiveNumberSummary};

use crate::config::Mode;
use crate::error::{Error, Result};
use crate::io::csv_writer;

pub const RECORD_HEADER: [&str; 9] =
    ["mode", "method", "alpha", "seed", "t_n", "event_count", "gap", "shrinkage_ratio", "flags"];
pub const SUMMARY_HEADER: [&str; 8] = ["method", "alpha", "q1", "median", "q3", "lo", "hi", "n_outliers"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// The gap rises with alpha here.
    PositiveSlope,
    /// `|lambda_2|` ties with `|lambda_1|` or `|lambda_3|`; no shrinkage ratio.
    DegenerateFiedler,
    /// Eigenvectors could not be separated numerically; no shrinkage ratio.
    EigenFailure,
    /// Last event time; there is no next interval to measure shrinkage on.
    NoNextInterval,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::PositiveSlope => "positive_slope",
            Flag::DegenerateFiedler => "degenerate_fiedler",
            Flag::EigenFailure => "eigen_failure",
            Flag::NoNextInterval => "no_next_interval",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub mode: Mode,
    /// `original`, a randomization code, `tie-decay` or `aggregate`.
    pub method: String,
    pub alpha: f64,
    /// Seed of the randomized stream; `None` for deterministic rows.
    pub seed: Option<u64>,
    /// Time in the input file's units.
    pub t_n: f64,
    pub event_count: usize,
    pub gap: f64,
    pub shrinkage_ratio: Option<f64>,
    pub flags: Vec<Flag>,
}

impl Record {
    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    fn fields(&self) -> [String; 9] {
        let flags: Vec<&str> = self.flags.iter().map(|f| f.as_str()).collect();
        [
            self.mode.to_string(),
            self.method.clone(),
            self.alpha.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.t_n.to_string(),
            self.event_count.to_string(),
            self.gap.to_string(),
            self.shrinkage_ratio.map(|r| r.to_string()).unwrap_or_default(),
            flags.join(";"),
        ]
    }
}

pub fn sort_records(records: &mut [Record]) {
    records.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.seed.cmp(&b.seed))
            .then(a.t_n.total_cmp(&b.t_n))
    });
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub alpha: f64,
    pub summary: FiveNumberSummary,
}

pub fn write_records<W: Write>(w: W, records: &[Record]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(RECORD_HEADER)?;
    for r in records {
        out.write_record(r.fields())?;
    }
    out.flush().map_err(|e| Error::io("<records>", e))
}

pub fn write_summaries<W: Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        let s = &r.summary;
        out.write_record([
            r.method.clone(),
            r.alpha.to_string(),
            s.q1.to_string(),
            s.median.to_string(),
            s.q3.to_string(),
            s.lo.to_string(),
            s.hi.to_string(),
            s.outliers.len().to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<summary>", e))
}
