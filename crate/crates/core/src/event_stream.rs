//! Time-stamped contact streams.
//!
//! Text format, one contact per line:
//!
//! ```text
//! # comment
//! <time> <node> <node>
//! ```
//!
//! Node labels are arbitrary tokens and are relabelled to a dense `0..N`
//! index in order of first appearance in the time-sorted stream. Times are
//! shifted so that the earliest contact happens at `t = 0`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub source: NodeId,
    pub target: NodeId,
}

impl Event {
    pub fn new(time: f64, source: NodeId, target: NodeId) -> Self {
        Event { time, source, target }
    }

    /// Index key of the edge this event lives on.
    #[inline]
    pub fn edge(&self, directed: bool) -> (NodeId, NodeId) {
        edge_key(self.source, self.target, directed)
    }
}

#[inline]
pub fn edge_key(a: NodeId, b: NodeId, directed: bool) -> (NodeId, NodeId) {
    if directed || a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParseOptions {
    pub directed: bool,
    /// Ignore tokens after the third on each line (some contact datasets
    /// carry per-node metadata columns).
    pub allow_extra_columns: bool,
    /// Sampling resolution of the source data in seconds. Informational.
    pub time_resolution: Option<f64>,
}

/// A validated contact stream on `N` nodes, sorted by time.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    events: Vec<Event>,
    labels: Vec<String>,
    directed: bool,
    time_resolution: Option<f64>,
    time_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamStats {
    pub nodes: usize,
    pub edges: usize,
    pub events: usize,
    /// Each contact involves two nodes, so this is `2 * events / nodes`.
    pub mean_events_per_node: f64,
}

/// All events sharing one time stamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGroup<'a> {
    pub time: f64,
    pub events: &'a [Event],
}

impl EventStream {
    /// Builds a stream from already indexed events. Events are stably sorted
    /// by time; times are kept as given.
    pub fn from_events(node_count: usize, mut events: Vec<Event>, directed: bool) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyInput);
        }
        for e in &events {
            validate_event(e, node_count)?;
        }
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Ok(EventStream { events, labels, directed, time_resolution: None, time_offset: 0.0 })
    }

    /// Same as [`EventStream::from_events`] but reusing the node labels and
    /// metadata of `template`.
    pub fn with_template(template: &EventStream, events: Vec<Event>) -> Result<Self> {
        let mut s = EventStream::from_events(template.node_count(), events, template.directed)?;
        s.labels = template.labels.clone();
        s.time_resolution = template.time_resolution;
        s.time_offset = template.time_offset;
        Ok(s)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn time_resolution(&self) -> Option<f64> {
        self.time_resolution
    }

    /// Amount subtracted from the raw input times during parsing.
    pub fn time_offset(&self) -> f64 {
        self.time_offset
    }

    pub fn start_time(&self) -> f64 {
        self.events[0].time
    }

    /// Time of the last event, `T`.
    pub fn horizon(&self) -> f64 {
        self.events[self.events.len() - 1].time
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn edge_index(&self) -> EdgeEventIndex {
        EdgeEventIndex::from_stream(self)
    }

    pub fn stats(&self) -> StreamStats {
        stream_stats(self)
    }

    pub fn groups(&self) -> Vec<TimeGroup<'_>> {
        group_event_times(self)
    }

    pub fn distinct_time_count(&self) -> usize {
        let mut count = 0;
        let mut last = f64::NAN;
        for e in &self.events {
            if e.time != last {
                count += 1;
                last = e.time;
            }
        }
        count
    }

    /// Serializes back to the `t i j` text format using the original labels
    /// and the original time origin.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.events.len() * 16);
        for e in &self.events {
            let t = e.time + self.time_offset;
            let _ = writeln!(out, "{} {} {}", t, self.labels[e.source as usize], self.labels[e.target as usize]);
        }
        out
    }
}

fn validate_event(e: &Event, node_count: usize) -> Result<()> {
    if !e.time.is_finite() {
        return Err(Error::NonFinite("event time"));
    }
    if e.time < 0.0 {
        return Err(Error::param("time", format!("negative event time {}", e.time)));
    }
    for idx in [e.source, e.target] {
        if idx as usize >= node_count {
            return Err(Error::NodeOutOfRange { index: idx as usize, nodes: node_count });
        }
    }
    if e.source == e.target {
        return Err(Error::SelfEvent { line: 0, label: e.source.to_string() });
    }
    Ok(())
}

/// Parses the `t i j` text format.
pub fn parse_events(text: &str, options: ParseOptions) -> Result<EventStream> {
    struct Raw<'a> {
        time: f64,
        a: &'a str,
        b: &'a str,
    }

    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(t), Some(a), Some(b)) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse { line: line_no, reason: "expected `time node node`".into() });
        };
        if !options.allow_extra_columns && tokens.next().is_some() {
            return Err(Error::Parse { line: line_no, reason: "more than three columns".into() });
        }
        let time: f64 = t
            .parse()
            .map_err(|_| Error::Parse { line: line_no, reason: format!("invalid time `{t}`") })?;
        if !time.is_finite() || time < 0.0 {
            return Err(Error::Parse { line: line_no, reason: format!("time must be finite and non-negative, got `{t}`") });
        }
        if a == b {
            return Err(Error::SelfEvent { line: line_no, label: a.to_string() });
        }
        raw.push(Raw { time, a, b });
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    raw.sort_by(|x, y| x.time.total_cmp(&y.time));
    let offset = raw[0].time;

    let mut ids: BTreeMap<&str, NodeId> = BTreeMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut intern = |label| {
        *ids.entry(label).or_insert_with(|| {
            labels.push(String::from(label));
            (labels.len() - 1) as NodeId
        })
    };
    let mut events = Vec::with_capacity(raw.len());
    for r in &raw {
        let source = intern(r.a);
        let target = intern(r.b);
        events.push(Event { time: r.time - offset, source, target });
    }

    Ok(EventStream {
        events,
        labels,
        directed: options.directed,
        time_resolution: options.time_resolution,
        time_offset: offset,
    })
}

/// Sorted event times per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeEventIndex {
    directed: bool,
    edges: BTreeMap<(NodeId, NodeId), Vec<f64>>,
}

impl EdgeEventIndex {
    pub fn from_stream(s: &EventStream) -> Self {
        let mut edges: BTreeMap<(NodeId, NodeId), Vec<f64>> = BTreeMap::new();
        for e in s.events() {
            edges.entry(e.edge(s.is_directed())).or_default().push(e.time);
        }
        // events are time-sorted, so every list already is
        EdgeEventIndex { directed: s.is_directed(), edges }
    }

    pub fn from_map(edges: BTreeMap<(NodeId, NodeId), Vec<f64>>, directed: bool) -> Self {
        EdgeEventIndex { directed, edges }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn event_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> Option<&[f64]> {
        self.edges.get(&edge_key(a, b, self.directed)).map(Vec::as_slice)
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        self.edges.contains_key(&edge_key(a, b, self.directed))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &Vec<f64>)> {
        self.edges.iter()
    }

    pub fn into_map(self) -> BTreeMap<(NodeId, NodeId), Vec<f64>> {
        self.edges
    }

    /// Number of distinct edges incident to each node.
    pub fn degrees(&self, node_count: usize) -> Vec<usize> {
        let mut deg = vec![0; node_count];
        for &(a, b) in self.edges.keys() {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg
    }

    /// Rebuilds a stream with the labels and metadata of `template`.
    pub fn to_stream(&self, template: &EventStream) -> Result<EventStream> {
        let mut events = Vec::with_capacity(self.event_count());
        for (&(a, b), times) in &self.edges {
            events.extend(times.iter().map(|&t| Event::new(t, a, b)));
        }
        // canonical order: time, then edge key
        events.sort_by(|x, y| x.time.total_cmp(&y.time).then((x.source, x.target).cmp(&(y.source, y.target))));
        EventStream::with_template(template, events)
    }
}

pub fn stream_stats(s: &EventStream) -> StreamStats {
    let nodes = s.node_count();
    let events = s.len();
    let edges = s.events().iter().map(|e| e.edge(s.is_directed())).collect::<BTreeSet<_>>().len();
    StreamStats { nodes, edges, events, mean_events_per_node: 2.0 * events as f64 / nodes as f64 }
}

/// Splits the stream into groups of simultaneous events with strictly
/// increasing times.
pub fn group_event_times(s: &EventStream) -> Vec<TimeGroup<'_>> {
    let events = s.events();
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=events.len() {
        if i == events.len() || events[i].time != events[start].time {
            groups.push(TimeGroup { time: events[start].time, events: &events[start..i] });
            start = i;
        }
    }
    groups
}

/// Repeatedly drops nodes with fewer than `min_edges` distinct incident edges,
/// together with their events, until no such node remains. Surviving nodes
/// are reindexed densely in their original order.
pub fn exclude_low_degree_nodes(s: &EventStream, min_edges: usize) -> Result<EventStream> {
    let n = s.node_count();
    let mut alive = vec![true; n];
    let mut events: Vec<Event> = s.events().to_vec();
    loop {
        let edges: BTreeSet<(NodeId, NodeId)> = events.iter().map(|e| e.edge(s.is_directed())).collect();
        let mut deg = vec![0usize; n];
        for (a, b) in edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut changed = false;
        for v in 0..n {
            if alive[v] && deg[v] < min_edges {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        events.retain(|e| alive[e.source as usize] && alive[e.target as usize]);
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if events.is_empty() || survivors.is_empty() {
        return Err(Error::EmptyAfterExclusion { min_edges });
    }
    let mut remap = vec![NodeId::MAX; n];
    for (new, &old) in survivors.iter().enumerate() {
        remap[old] = new as NodeId;
    }
    let events = events
        .into_iter()
        .map(|e| Event::new(e.time, remap[e.source as usize], remap[e.target as usize]))
        .collect();
    Ok(EventStream {
        events,
        labels: survivors.iter().map(|&v| s.labels[v].clone()).collect(),
        directed: s.directed,
        time_resolution: s.time_resolution,
        time_offset: s.time_offset,
    })
}
