use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: self-event on node `{label}`")]
    SelfEvent { line: usize, label: String },
    #[error("empty input: no events")]
    EmptyInput,
    #[error("stream is empty after excluding nodes with fewer than {min_edges} edges")]
    EmptyAfterExclusion { min_edges: usize },
    #[error("cannot move from t={from} back to t={to}")]
    TimeTravel { from: f64, to: f64 },
    #[error("event at t={event} does not match state time t={state}")]
    EventTimeMismatch { event: f64, state: f64 },
    #[error("node index {index} out of range for {nodes} nodes")]
    NodeOutOfRange { index: usize, nodes: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("eigensolver failed: {0}")]
    EigenFailure(String),
    #[error("largest eigenvalue magnitude {0} deviates from 1; not a propagator")]
    NotPropagator(f64),
    #[error("second eigenvalue is degenerate (|l1|={l1}, |l2|={l2}, |l3|={l3})")]
    DegenerateFiedler { l1: f64, l2: f64, l3: f64 },
    #[error("need at least 2 edges, stream has {0}")]
    TooFewEdges(usize),
    #[error("stream spans zero time; horizon must be positive")]
    ZeroHorizon,
    #[error("singular matrix")]
    Singular,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
