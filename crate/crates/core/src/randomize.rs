//! Randomized reference streams.
//!
//! Four methods, each preserving a different set of statistics:
//!
//! | method | inter-event times per edge | events per time step | aggregate structure |
//! |--------|----------------------------|----------------------|---------------------|
//! | interval shuffling (`is`)    | kept | changed | kept |
//! | shuffled time stamps (`sts`) | changed | kept | kept |
//! | random times (`rt`)          | changed | changed | kept |
//! | random edge shuffling (`res`)| changed | kept | changed |
//!
//! All of them destroy temporal correlations.
//!
//! # Random draws
//!
//! Every call owns a [`ChaCha8Rng`] seeded with `ChaCha8Rng::seed_from_u64(seed)`.
//! Edges are always visited in ascending key order, and the draws are:
//!
//! * `is`: for each edge with at least 3 events, a Fisher-Yates pass over its
//!   inter-event times (`for i in (1..k).rev() { j = gen_range(0..=i) }`).
//! * `sts`: per repetition, `a = gen_range(0..E)`, `b = gen_range(0..E-1)`
//!   (bumped by one if `b >= a`), then `gen_range(0..len_a)` and
//!   `gen_range(0..len_b)` for the two events.
//! * `rt`: for each edge, `k` draws of `gen_range(t0..=T)`.
//! * `res`: per attempt, `a` and `b` as for `sts`; in undirected streams two
//!   further `gen_bool(0.5)` draws decide the orientation of each edge.
//!
//! Ensemble members use the seed from [`member_seed`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::event_stream::{edge_key, EdgeEventIndex, EventStream, NodeId};

/// Attempts per edge-shuffle repetition before the repetition is skipped.
pub const MAX_REWIRE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    IntervalShuffling,
    ShuffledTimeStamps,
    RandomTimes,
    RandomEdgeShuffling,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::IntervalShuffling, Method::ShuffledTimeStamps, Method::RandomTimes, Method::RandomEdgeShuffling];

    /// Short code used on the command line and in CSV output.
    pub fn code(self) -> &'static str {
        match self {
            Method::IntervalShuffling => "is",
            Method::ShuffledTimeStamps => "sts",
            Method::RandomTimes => "rt",
            Method::RandomEdgeShuffling => "res",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "is" | "interval_shuffling" => Ok(Method::IntervalShuffling),
            "sts" | "shuffled_time_stamps" => Ok(Method::ShuffledTimeStamps),
            "rt" | "random_times" => Ok(Method::RandomTimes),
            "res" | "random_edge_shuffling" => Ok(Method::RandomEdgeShuffling),
            _ => Err(Error::param("method", alloc::format!("unknown randomization method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizerSpec {
    pub method: Method,
    pub seed: u64,
    /// Swap count for `sts` and `res`; `None` means the number of distinct
    /// event times. Ignored by the other methods.
    pub repetitions: Option<usize>,
}

impl RandomizerSpec {
    pub fn new(method: Method, seed: u64) -> Self {
        RandomizerSpec { method, seed, repetitions: None }
    }
}

/// Seed of ensemble member `member` under base seed `base`: one SplitMix64
/// output on `base + (member + 1) * 0x9E3779B97F4A7C15` (wrapping).
pub fn member_seed(base: u64, member: u64) -> u64 {
    let mut z = base.wrapping_add(member.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randomize(s: &EventStream, spec: &RandomizerSpec) -> Result<EventStream> {
    let reps = spec.repetitions.unwrap_or_else(|| s.distinct_time_count());
    match spec.method {
        Method::IntervalShuffling => interval_shuffle(s, spec.seed),
        Method::ShuffledTimeStamps => shuffle_time_stamps(s, spec.seed, reps),
        Method::RandomTimes => random_times(s, spec.seed),
        Method::RandomEdgeShuffling => random_edge_shuffle(s, spec.seed, reps),
    }
}

fn fisher_yates<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Two distinct indices below `n` (`n >= 2`).
fn distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Permutes the inter-event times of each edge, keeping its first and last
/// event times.
pub fn interval_shuffle(s: &EventStream, seed: u64) -> Result<EventStream> {
    let mut rng = rng_from_seed(seed);
    let mut edges = s.edge_index().into_map();
    for times in edges.values_mut() {
        let k = times.len();
        if k < 3 {
            continue;
        }
        let last = times[k - 1];
        let mut gaps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
        fisher_yates(&mut rng, &mut gaps);
        let mut t = times[0];
        for (slot, gap) in times[1..k - 1].iter_mut().zip(&gaps) {
            t += gap;
            *slot = t;
        }
        times[k - 1] = last;
    }
    EdgeEventIndex::from_map(edges, s.is_directed()).to_stream(s)
}

/// Swaps the times of one random event on each of two random distinct edges,
/// `repetitions` times.
pub fn shuffle_time_stamps(s: &EventStream, seed: u64, repetitions: usize) -> Result<EventStream> {
    let (keys, mut lists) = edge_lists(s)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..repetitions {
        let (a, b) = distinct_pair(&mut rng, keys.len());
        let ea = rng.gen_range(0..lists[a].len());
        let eb = rng.gen_range(0..lists[b].len());
        let ta = lists[a][ea];
        lists[a][ea] = lists[b][eb];
        lists[b][eb] = ta;
    }
    rebuild(s, keys, lists)
}

/// Replaces the event times of every edge by the same number of independent
/// uniform draws on the stream's time window.
pub fn random_times(s: &EventStream, seed: u64) -> Result<EventStream> {
    let t0 = s.start_time();
    let t1 = s.horizon();
    if t1 <= t0 {
        return Err(Error::ZeroHorizon);
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = s.edge_index().into_map();
    for times in edges.values_mut() {
        for t in times.iter_mut() {
            *t = rng.gen_range(t0..=t1);
        }
    }
    EdgeEventIndex::from_map(edges, s.is_directed()).to_stream(s)
}

/// Degree-preserving rewiring: `(i, j), (i', j')` become `(i, j'), (i', j)`,
/// each new edge taking the event times of the edge it replaces. Proposals
/// that would create a self-loop or an existing edge are redrawn up to
/// [`MAX_REWIRE_ATTEMPTS`] times, after which the repetition is skipped.
pub fn random_edge_shuffle(s: &EventStream, seed: u64, repetitions: usize) -> Result<EventStream> {
    let directed = s.is_directed();
    let (mut keys, lists) = edge_lists(s)?;
    let mut present: BTreeSet<(NodeId, NodeId)> = keys.iter().copied().collect();
    let mut rng = rng_from_seed(seed);
    for _ in 0..repetitions {
        for _ in 0..MAX_REWIRE_ATTEMPTS {
            let (a, b) = distinct_pair(&mut rng, keys.len());
            let (mut i, mut j) = keys[a];
            let (mut i2, mut j2) = keys[b];
            if !directed {
                if rng.gen_bool(0.5) {
                    core::mem::swap(&mut i, &mut j);
                }
                if rng.gen_bool(0.5) {
                    core::mem::swap(&mut i2, &mut j2);
                }
            }
            if i == j2 || i2 == j {
                continue;
            }
            let first = edge_key(i, j2, directed);
            let second = edge_key(i2, j, directed);
            if present.contains(&first) || present.contains(&second) {
                continue;
            }
            present.remove(&keys[a]);
            present.remove(&keys[b]);
            present.insert(first);
            present.insert(second);
            keys[a] = first;
            keys[b] = second;
            break;
        }
    }
    rebuild(s, keys, lists)
}

type EdgeLists = (Vec<(NodeId, NodeId)>, Vec<Vec<f64>>);

fn edge_lists(s: &EventStream) -> Result<EdgeLists> {
    let map = s.edge_index().into_map();
    if map.len() < 2 {
        return Err(Error::TooFewEdges(map.len()));
    }
    Ok(map.into_iter().unzip())
}

fn rebuild(s: &EventStream, keys: Vec<(NodeId, NodeId)>, lists: Vec<Vec<f64>>) -> Result<EventStream> {
    let mut map: BTreeMap<(NodeId, NodeId), Vec<f64>> = BTreeMap::new();
    for (k, mut times) in keys.into_iter().zip(lists) {
        times.sort_by(f64::total_cmp);
        map.insert(k, times);
    }
    EdgeEventIndex::from_map(map, s.is_directed()).to_stream(s)
}
