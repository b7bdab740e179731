//! Time-averaged static network and its constant-Laplacian propagator.

use crate::error::{Error, Result};
use crate::event_stream::EventStream;
use crate::expm::expm;
use crate::linalg::Matrix;
use crate::tie_decay::{check_alpha, Laplacian};

/// Mean tie strength of every pair over the observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateNetwork {
    pub weights: Matrix,
    pub alpha: f64,
    /// Length of the window the weights are averaged over.
    pub horizon: f64,
}

/// `w_ij = (1/(alpha T)) sum_l (1 - exp(-alpha (T - t_l)))` over the events
/// on `(i, j)`, with `T` measured from the stream's first event.
pub fn aggregate_weights(s: &EventStream, alpha: f64) -> Result<AggregateNetwork> {
    check_alpha(alpha)?;
    let t0 = s.start_time();
    let end = s.horizon();
    let horizon = end - t0;
    if horizon <= 0.0 {
        return Err(Error::ZeroHorizon);
    }
    let n = s.node_count();
    let mut weights = Matrix::zeros(n, n);
    let norm = 1.0 / (alpha * horizon);
    for e in s.events() {
        let w = -libm::expm1(-alpha * (end - e.time)) * norm;
        let (i, j) = (e.source as usize, e.target as usize);
        weights[(i, j)] += w;
        if !s.is_directed() {
            weights[(j, i)] += w;
        }
    }
    Ok(AggregateNetwork { weights, alpha, horizon })
}

impl AggregateNetwork {
    pub fn laplacian(&self) -> Laplacian {
        Laplacian::from_weights(&self.weights)
    }

    /// `exp(-t L^T)`, the opinion propagator over time `t` on the static
    /// network.
    pub fn propagator(&self, t: f64) -> Result<Matrix> {
        aggregate_propagator(self, t)
    }
}

pub fn aggregate_propagator(agg: &AggregateNetwork, t: f64) -> Result<Matrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param("t", alloc::format!("propagation time must be finite and non-negative, got {t}")));
    }
    let lt = agg.laplacian().into_matrix().transpose();
    expm(&lt.scale(-t))
}
