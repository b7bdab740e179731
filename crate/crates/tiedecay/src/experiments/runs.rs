use std::collections::BTreeMap;

use rayon::prelude::*;
use tiedecay_core::aggregate::aggregate_weights;
use tiedecay_core::propagator::{propagate, PropagateOptions, PropagatorWalk};
use tiedecay_core::randomize::{member_seed, randomize};
use tiedecay_core::spectral::{shrinkage_ratio, spectral_gap};
use tiedecay_core::{EventStream, Method, RandomizerSpec};

use super::summary::summary_stats;
use super::{sort_records, Flag, Record, SummaryRow};
use crate::config::Mode;
use crate::error::Result;

/// Method label of rows computed on the unmodified input stream.
pub const ORIGINAL: &str = "original";
/// Slopes of gap against `ln(alpha)` at or below this are not flagged.
pub const SLOPE_DEAD_BAND: f64 = 1e-9;

/// Spectral gap of `M(upto)`.
pub fn gap_at(s: &EventStream, alpha: f64, upto: f64) -> Result<f64> {
    let m = propagate(s, alpha, upto)?.matrix;
    Ok(spectral_gap(&m)?)
}

/// Gap of `M(T)` for each alpha, evaluated in parallel.
pub fn sweep_gaps(s: &EventStream, alphas: &[f64], upto: f64) -> Result<Vec<f64>> {
    alphas.par_iter().map(|&a| gap_at(s, a, upto)).collect()
}

/// Marks grid points where the gap increases with alpha. The slope is a
/// central difference in `ln(alpha)` (one-sided at the ends); `alphas` must
/// be ascending.
pub fn positive_slope_flags(alphas: &[f64], gaps: &[f64]) -> Vec<bool> {
    let n = alphas.len();
    (0..n)
        .map(|k| {
            if n < 2 {
                return false;
            }
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(n - 1);
            let slope = (gaps[hi] - gaps[lo]) / (alphas[hi].ln() - alphas[lo].ln());
            slope > SLOPE_DEAD_BAND
        })
        .collect()
}

/// Maximal runs of flagged grid points as `(first alpha, last alpha)`.
pub fn flagged_intervals(alphas: &[f64], flags: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for k in 0..=flags.len() {
        let on = flags.get(k).copied().unwrap_or(false);
        match (on, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push((alphas[s], alphas[k - 1]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn absolute_end(s: &EventStream) -> f64 {
    s.horizon() + s.time_offset()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleOutput {
    pub records: Vec<Record>,
    pub summaries: Vec<SummaryRow>,
}

/// Randomized stream of ensemble member `member`, with the seed it used.
pub fn ensemble_member(s: &EventStream, method: Method, base_seed: u64, member: u64) -> Result<(u64, EventStream)> {
    let seed = member_seed(base_seed, member);
    Ok((seed, randomize(s, &RandomizerSpec::new(method, seed))?))
}

/// Gap of `M(T)` for the input and for `ensemble` randomizations per
/// method, plus a box-plot summary per (method, alpha).
///
/// Randomized streams are evaluated on the input's window, so `T` is the
/// same for every member even when random times end earlier.
pub fn run_ensemble(
    s: &EventStream,
    alphas: &[f64],
    methods: &[Method],
    ensemble: usize,
    base_seed: u64,
) -> Result<EnsembleOutput> {
    let horizon = s.horizon();
    let t_n = absolute_end(s);
    let row = |method: &str, alpha: f64, seed: Option<u64>, gap: f64| Record {
        mode: Mode::Ensemble,
        method: method.to_string(),
        alpha,
        seed,
        t_n,
        event_count: s.len(),
        gap,
        shrinkage_ratio: None,
        flags: Vec::new(),
    };

    let mut records = Vec::new();
    for (&alpha, gap) in alphas.iter().zip(sweep_gaps(s, alphas, horizon)?) {
        records.push(row(ORIGINAL, alpha, None, gap));
    }

    let jobs: Vec<(Method, u64)> =
        methods.iter().flat_map(|&m| (0..ensemble as u64).map(move |k| (m, k))).collect();
    let members: Vec<Vec<Record>> = jobs
        .par_iter()
        .map(|&(method, k)| {
            let (seed, rs) = ensemble_member(s, method, base_seed, k)?;
            alphas
                .iter()
                .map(|&alpha| Ok(row(method.code(), alpha, Some(seed), gap_at(&rs, alpha, horizon)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    records.extend(members.into_iter().flatten());
    sort_records(&mut records);

    let mut groups: BTreeMap<(String, u64), (f64, Vec<f64>)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.seed.is_some()) {
        groups.entry((r.method.clone(), r.alpha.to_bits())).or_insert((r.alpha, Vec::new())).1.push(r.gap);
    }
    let mut summaries = Vec::with_capacity(groups.len());
    for ((method, _), (alpha, gaps)) in groups {
        summaries.push(SummaryRow { method, alpha, summary: summary_stats(&gaps)? });
    }
    summaries.sort_by(|a, b| a.method.cmp(&b.method).then(a.alpha.total_cmp(&b.alpha)));
    Ok(EnsembleOutput { records, summaries })
}

/// Gap of `M(T)` over `alphas` (ascending) for the input and, when
/// `methods` is non-empty, for `ensemble` randomizations per method. Each
/// curve gets its own positive-slope flags.
pub fn run_alpha_sweep(
    s: &EventStream,
    alphas: &[f64],
    methods: &[Method],
    ensemble: usize,
    base_seed: u64,
) -> Result<Vec<Record>> {
    let horizon = s.horizon();
    let t_n = absolute_end(s);
    let curve = |stream: &EventStream, method: &str, seed: Option<u64>| -> Result<Vec<Record>> {
        let gaps = sweep_gaps(stream, alphas, horizon)?;
        let flags = positive_slope_flags(alphas, &gaps);
        Ok(alphas
            .iter()
            .zip(gaps)
            .zip(flags)
            .map(|((&alpha, gap), up)| Record {
                mode: Mode::AlphaSweep,
                method: method.to_string(),
                alpha,
                seed,
                t_n,
                event_count: s.len(),
                gap,
                shrinkage_ratio: None,
                flags: if up { vec![Flag::PositiveSlope] } else { Vec::new() },
            })
            .collect())
    };

    let mut records = curve(s, ORIGINAL, None)?;
    let jobs: Vec<(Method, u64)> =
        methods.iter().flat_map(|&m| (0..ensemble as u64).map(move |k| (m, k))).collect();
    let members: Vec<Vec<Record>> = jobs
        .par_iter()
        .map(|&(method, k)| {
            let (seed, rs) = ensemble_member(s, method, base_seed, k)?;
            curve(&rs, method.code(), Some(seed))
        })
        .collect::<Result<_>>()?;
    records.extend(members.into_iter().flatten());
    sort_records(&mut records);
    Ok(records)
}

/// One row per distinct event time `t_n`: the number of events at `t_n`,
/// the gap of `M(t_n)` (before those events) and the shrinkage ratio of the
/// left Fiedler vector of `M(t_n)` under the next interval factor.
pub fn run_time_series(s: &EventStream, alphas: &[f64]) -> Result<Vec<Record>> {
    let per_alpha: Vec<Vec<Record>> = alphas.par_iter().map(|&alpha| time_series_for(s, alpha)).collect::<Result<_>>()?;
    let mut records: Vec<Record> = per_alpha.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}

fn time_series_for(s: &EventStream, alpha: f64) -> Result<Vec<Record>> {
    let mut walk = PropagatorWalk::new(s, alpha, PropagateOptions::default())?;
    let mut rows = Vec::new();
    while !walk.is_finished() {
        let t = walk.time();
        let m = walk.propagator().clone();
        let event_count = walk.pending_events().len();
        let gap = spectral_gap(&m)?;
        let mut flags = Vec::new();
        let shrinkage = match walk.step()? {
            Some(factor) => match shrinkage_ratio(&m, &factor.matrix) {
                Ok(report) => Some(report.ratio),
                Err(tiedecay_core::Error::DegenerateFiedler { .. }) => {
                    flags.push(Flag::DegenerateFiedler);
                    None
                }
                Err(tiedecay_core::Error::EigenFailure(_) | tiedecay_core::Error::Singular) => {
                    flags.push(Flag::EigenFailure);
                    None
                }
                Err(e) => return Err(e.into()),
            },
            None => {
                flags.push(Flag::NoNextInterval);
                None
            }
        };
        rows.push(Record {
            mode: Mode::TimeSeries,
            method: ORIGINAL.to_string(),
            alpha,
            seed: None,
            t_n: t + s.time_offset(),
            event_count,
            gap,
            shrinkage_ratio: shrinkage,
            flags,
        });
    }
    Ok(rows)
}

/// Gap of the tie-decay propagator `M(T)` next to the gap of the
/// aggregate-network propagator `exp(-T L^T)`, per alpha.
pub fn run_aggregate_compare(s: &EventStream, alphas: &[f64]) -> Result<Vec<Record>> {
    let horizon = s.horizon();
    let t_n = absolute_end(s);
    let pairs: Vec<[Record; 2]> = alphas
        .par_iter()
        .map(|&alpha| {
            let tie = gap_at(s, alpha, horizon)?;
            let agg = match aggregate_weights(s, alpha) {
                Ok(agg) => spectral_gap(&agg.propagator(agg.horizon)?)?,
                // a single-instant stream has no window to average over
                Err(tiedecay_core::Error::ZeroHorizon) => 0.0,
                Err(e) => return Err(e.into()),
            };
            let row = |method: &str, gap: f64| Record {
                mode: Mode::AggregateCompare,
                method: method.to_string(),
                alpha,
                seed: None,
                t_n,
                event_count: s.len(),
                gap,
                shrinkage_ratio: None,
                flags: Vec::new(),
            };
            Ok([row("tie-decay", tie), row("aggregate", agg)])
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<Record> = pairs.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}
