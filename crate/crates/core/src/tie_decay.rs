//! Tie strengths that jump by one per contact and decay exponentially.

use alloc::format;

use crate::error::{Error, Result};
use crate::event_stream::Event;
use crate::linalg::Matrix;

/// Weights at or below this after decay are set to exactly zero.
pub const FLUSH_TO_ZERO: f64 = 1e-300;

/// Tie-strength matrix `B(t)` of a tie-decay network.
///
/// Entry `(i, j)` is the strength of the tie from `i` to `j`. In undirected
/// mode every contact bumps both `(i, j)` and `(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TieDecayState {
    weights: Matrix,
    time: f64,
    alpha: f64,
    directed: bool,
}

/// Combinatorial Laplacian `L = D - B` of a weight matrix, with `D` the
/// diagonal of row sums (weighted out-degrees).
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(Matrix);

impl TieDecayState {
    pub fn new(node_count: usize, alpha: f64, directed: bool, start_time: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !start_time.is_finite() {
            return Err(Error::NonFinite("start time"));
        }
        Ok(TieDecayState { weights: Matrix::zeros(node_count, node_count), time: start_time, alpha, directed })
    }

    pub fn node_count(&self) -> usize {
        self.weights.rows()
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Decays every tie from the current time to `t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        if t.is_nan() {
            return Err(Error::NonFinite("decay target time"));
        }
        if t < self.time {
            return Err(Error::TimeTravel { from: self.time, to: t });
        }
        if t == self.time {
            return Ok(());
        }
        let factor = libm::exp(-self.alpha * (t - self.time));
        for w in self.weights.as_mut_slice() {
            *w *= factor;
            if *w <= FLUSH_TO_ZERO {
                *w = 0.0;
            }
        }
        self.time = t;
        Ok(())
    }

    /// Adds one unit of tie strength per event. All events must carry the
    /// current time.
    pub fn apply(&mut self, events: &[Event]) -> Result<()> {
        let n = self.node_count();
        for e in events {
            if e.time != self.time {
                return Err(Error::EventTimeMismatch { event: e.time, state: self.time });
            }
            let (i, j) = (e.source as usize, e.target as usize);
            if i >= n || j >= n {
                return Err(Error::NodeOutOfRange { index: i.max(j), nodes: n });
            }
            if i == j {
                return Err(Error::param("events", format!("self-event on node {i}")));
            }
        }
        for e in events {
            let (i, j) = (e.source as usize, e.target as usize);
            self.weights[(i, j)] += 1.0;
            if !self.directed {
                self.weights[(j, i)] += 1.0;
            }
        }
        Ok(())
    }

    /// Value-returning form of [`TieDecayState::advance_to`].
    pub fn decay_to(&self, t: f64) -> Result<Self> {
        let mut next = self.clone();
        next.advance_to(t)?;
        Ok(next)
    }

    /// Value-returning form of [`TieDecayState::apply`].
    pub fn apply_events(&self, events: &[Event]) -> Result<Self> {
        let mut next = self.clone();
        next.apply(events)?;
        Ok(next)
    }

    pub fn laplacian(&self) -> Laplacian {
        Laplacian::from_weights(&self.weights)
    }
}

impl Laplacian {
    pub fn from_weights(b: &Matrix) -> Laplacian {
        let n = b.rows();
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            let mut degree = 0.0;
            for j in 0..n {
                if i != j {
                    l[(i, j)] = -b[(i, j)];
                    degree += b[(i, j)];
                }
            }
            l[(i, i)] = degree;
        }
        Laplacian(l)
    }

    /// Wraps a matrix that is already a Laplacian (rows summing to zero,
    /// non-positive off-diagonal).
    pub fn from_matrix(m: Matrix) -> Result<Laplacian> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("laplacian"));
        }
        let n = m.rows();
        for i in 0..n {
            let scale = m.row(i).iter().fold(0.0f64, |s, v| s.max(v.abs()));
            if m.row(i).iter().sum::<f64>().abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::param("laplacian", format!("row {i} does not sum to zero")));
            }
            if (0..n).any(|j| j != i && m[(i, j)] > 0.0) {
                return Err(Error::param("laplacian", format!("row {i} has a positive off-diagonal entry")));
            }
        }
        Ok(Laplacian(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn node_count(&self) -> usize {
        self.0.rows()
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("decay rate must be positive and finite, got {alpha}")));
    }
    Ok(())
}
