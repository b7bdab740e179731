//! Experiment configuration from flags and `key=value` files.
//!
//! A config file holds one `key = value` pair per line, with keys spelled
//! like the long command-line flags (`alpha-grid`, `min-edges`, ...). Blank
//! lines and lines starting with `#` are ignored. Values given on the
//! command line take precedence over the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tiedecay_core::Method;

use crate::error::{Error, Result};

pub const DEFAULT_ENSEMBLE: usize = 50;
pub const DEFAULT_ALPHAS: [f64; 3] = [0.01, 1.0, 100.0];
pub const DEFAULT_GRID: AlphaGrid = AlphaGrid { lo: 1e-3, hi: 1e2, points: 51 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Ensemble,
    AlphaSweep,
    TimeSeries,
    AggregateCompare,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ensemble => "ensemble",
            Mode::AlphaSweep => "alpha-sweep",
            Mode::TimeSeries => "time-series",
            Mode::AggregateCompare => "aggregate-compare",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s.replace('_', "-").as_str() {
            "ensemble" => Ok(Mode::Ensemble),
            "alpha-sweep" => Ok(Mode::AlphaSweep),
            "time-series" => Ok(Mode::TimeSeries),
            "aggregate-compare" => Ok(Mode::AggregateCompare),
            _ => Err(Error::Config(format!("unknown mode `{s}`"))),
        }
    }
}

/// Log-spaced grid of `points` decay rates from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AlphaGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let last = self.points - 1;
        (0..self.points)
            .map(|k| match k {
                0 => self.lo,
                k if k == last => self.hi,
                k => (a + (b - a) * k as f64 / last as f64).exp(),
            })
            .collect()
    }
}

impl FromStr for AlphaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<AlphaGrid> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, points] = parts.as_slice() else {
            return Err(Error::Config(format!("alpha grid must be LO:HI:POINTS, got `{s}`")));
        };
        let lo = parse_positive(lo, "alpha-grid")?;
        let hi = parse_positive(hi, "alpha-grid")?;
        let points: usize =
            points.trim().parse().map_err(|_| Error::Config(format!("invalid grid point count `{points}`")))?;
        if points < 2 || hi <= lo {
            return Err(Error::Config(format!("alpha grid needs LO < HI and at least 2 points, got `{s}`")));
        }
        Ok(AlphaGrid { lo, hi, points })
    }
}

fn parse_positive(s: &str, key: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Config(format!("{key}: invalid number `{s}`")))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Config(format!("{key}: value must be positive, got `{s}`")));
    }
    Ok(v)
}

pub fn parse_alpha_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|a| parse_positive(a, "alpha")).collect()
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    if s.trim() == "all" {
        return Ok(Method::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let m: Method = part.trim().parse().map_err(|e: tiedecay_core::Error| Error::Config(e.to_string()))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Unvalidated settings as they come from a file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigValues {
    pub input: Option<PathBuf>,
    pub mode: Option<String>,
    pub alpha: Option<String>,
    pub alpha_grid: Option<String>,
    pub method: Option<String>,
    pub ensemble: Option<String>,
    pub seed: Option<String>,
    pub min_edges: Option<String>,
    pub directed: Option<bool>,
    pub strict: Option<bool>,
    pub out: Option<PathBuf>,
    pub export_dir: Option<PathBuf>,
}

impl ConfigValues {
    pub fn parse(text: &str) -> Result<ConfigValues> {
        let mut v = ConfigValues::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("config line {}: expected key=value", lineno + 1)));
            };
            let value = value.trim().to_string();
            match key.trim() {
                "input" => v.input = Some(value.into()),
                "mode" => v.mode = Some(value),
                "alpha" => v.alpha = Some(value),
                "alpha-grid" => v.alpha_grid = Some(value),
                "method" => v.method = Some(value),
                "ensemble" => v.ensemble = Some(value),
                "seed" => v.seed = Some(value),
                "min-edges" => v.min_edges = Some(value),
                "directed" => v.directed = Some(parse_bool(&value)?),
                "strict" => v.strict = Some(parse_bool(&value)?),
                "out" => v.out = Some(value.into()),
                "export-dir" => v.export_dir = Some(value.into()),
                other => return Err(Error::Config(format!("config line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(v)
    }

    pub fn read(path: &Path) -> Result<ConfigValues> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ConfigValues::parse(&text)
    }

    /// `over` wins wherever it sets a value. Setting either `alpha` or
    /// `alpha-grid` in `over` replaces both from `self`.
    pub fn merge(self, over: ConfigValues) -> ConfigValues {
        let alphas_overridden = over.alpha.is_some() || over.alpha_grid.is_some();
        ConfigValues {
            input: over.input.or(self.input),
            mode: over.mode.or(self.mode),
            alpha: if alphas_overridden { over.alpha } else { self.alpha },
            alpha_grid: if alphas_overridden { over.alpha_grid } else { self.alpha_grid },
            method: over.method.or(self.method),
            ensemble: over.ensemble.or(self.ensemble),
            seed: over.seed.or(self.seed),
            min_edges: over.min_edges.or(self.min_edges),
            directed: over.directed.or(self.directed),
            strict: over.strict.or(self.strict),
            out: over.out.or(self.out),
            export_dir: over.export_dir.or(self.export_dir),
        }
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean `{s}`"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub input: PathBuf,
    pub mode: Mode,
    /// Decay rates, ascending and without duplicates.
    pub alphas: Vec<f64>,
    pub methods: Vec<Method>,
    pub ensemble: usize,
    pub seed: u64,
    /// Nodes with fewer distinct neighbours are dropped before any run;
    /// 0 keeps every node.
    pub min_edges: usize,
    pub directed: bool,
    /// Reject lines with more than three columns.
    pub strict: bool,
    pub out: Option<PathBuf>,
    pub export_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_values(v: ConfigValues) -> Result<ExperimentConfig> {
        let input = v.input.ok_or_else(|| Error::Config("missing input path".into()))?;
        let mode: Mode = v.mode.ok_or_else(|| Error::Config("missing mode".into()))?.parse()?;
        let mut alphas = match (v.alpha, v.alpha_grid) {
            (Some(_), Some(_)) => return Err(Error::Config("give either alpha or alpha-grid, not both".into())),
            (Some(list), None) => parse_alpha_list(&list)?,
            (None, Some(grid)) => grid.parse::<AlphaGrid>()?.values(),
            (None, None) if mode == Mode::AlphaSweep => DEFAULT_GRID.values(),
            (None, None) => DEFAULT_ALPHAS.to_vec(),
        };
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        let methods = match v.method {
            Some(m) => parse_methods(&m)?,
            None if mode == Mode::Ensemble => Method::ALL.to_vec(),
            None => Vec::new(),
        };
        let ensemble = match v.ensemble {
            Some(e) => e.trim().parse().map_err(|_| Error::Config(format!("invalid ensemble size `{e}`")))?,
            None => DEFAULT_ENSEMBLE,
        };
        if ensemble == 0 {
            return Err(Error::Config("ensemble size must be at least 1".into()));
        }
        let seed = match v.seed {
            Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("invalid seed `{s}`")))?,
            None => 0,
        };
        let min_edges = match v.min_edges {
            Some(k) => k.trim().parse().map_err(|_| Error::Config(format!("invalid min-edges `{k}`")))?,
            None => 0,
        };
        Ok(ExperimentConfig {
            input,
            mode,
            alphas,
            methods,
            ensemble,
            seed,
            min_edges,
            directed: v.directed.unwrap_or(false),
            strict: v.strict.unwrap_or(false),
            out: v.out,
            export_dir: v.export_dir,
        })
    }
}

/// `results.csv` becomes `results_summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_summary.{}", ext.to_string_lossy()),
        None => format!("{stem}_summary"),
    };
    out.with_file_name(name)
}
