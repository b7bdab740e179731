//! Opinion propagators of Laplacian consensus dynamics on tie-decay networks.
//!
//! Between consecutive event times `t_k < t_{k+1}` the Laplacian only decays,
//! `L(t) = L(t_k+) exp(-alpha (t - t_k))`, so `dx/dt = -x L(t)^T` integrates
//! in closed form to one matrix exponential per interval:
//!
//! ```text
//! Y_k = exp( L(t_k+)^T * (exp(-alpha (t_{k+1} - t_k)) - 1) / alpha )
//! ```
//!
//! and the opinions at `t_n` are `x(t_n) = x(t_0) Y_0 Y_1 ... Y_{n-1}`. Every
//! factor is non-negative and column-stochastic, with `(1, ..., 1)` as a left
//! eigenvector of eigenvalue one. Observed at event times, the same dynamics
//! is a DeGroot model whose transition matrices are exactly these factors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::event_stream::{group_event_times, Event, EventStream, TimeGroup};
use crate::expm::{decay_coefficient, expm};
use crate::linalg::Matrix;
use crate::tie_decay::{check_alpha, Laplacian, TieDecayState};

/// One interval factor `Y` acting over `(start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFactor {
    pub matrix: Matrix,
    pub start: f64,
    pub end: f64,
}

impl IntervalFactor {
    /// Largest deviation of a column sum from one.
    pub fn column_sum_error(&self) -> f64 {
        column_sum_error(&self.matrix)
    }
}

/// Accumulated propagator `M(t)`, mapping opinions at the first event time to
/// opinions at `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub matrix: Matrix,
    pub time: f64,
    /// Number of non-trivial factors multiplied in.
    pub steps: usize,
    pub factors: Option<Vec<IntervalFactor>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PropagateOptions {
    /// Keep every interval factor in [`Propagator::factors`].
    pub keep_factors: bool,
}

pub fn column_sum_error(m: &Matrix) -> f64 {
    m.column_sums().into_iter().fold(0.0, |e, s| e.max((s - 1.0).abs()))
}

/// `exp(c L^T)` with `c = (exp(-alpha dt) - 1) / alpha`.
pub fn factor_matrix(laplacian: &Laplacian, delta_t: f64, alpha: f64) -> Result<Matrix> {
    check_alpha(alpha)?;
    if delta_t.is_nan() || delta_t < 0.0 {
        return Err(Error::param("delta_t", format!("interval length must be non-negative, got {delta_t}")));
    }
    let n = laplacian.node_count();
    let c = decay_coefficient(alpha, delta_t);
    if c == 0.0 || laplacian.matrix().max_abs() == 0.0 {
        return Ok(Matrix::identity(n));
    }
    let mut a = laplacian.matrix().transpose();
    a.scale_in_place(c);
    expm(&a)
}

/// Interval factor over `(0, delta_t]`.
pub fn interval_factor(laplacian: &Laplacian, delta_t: f64, alpha: f64) -> Result<IntervalFactor> {
    Ok(IntervalFactor { matrix: factor_matrix(laplacian, delta_t, alpha)?, start: 0.0, end: delta_t })
}

/// Walks a stream event time by event time, keeping the tie-decay state and
/// the propagator `M(t_n)` just before the events at `t_n` are applied.
#[derive(Debug)]
pub struct PropagatorWalk<'a> {
    groups: Vec<TimeGroup<'a>>,
    /// Index of the group whose time equals `time` and whose events are
    /// not yet applied; `groups.len()` once everything has been applied.
    cursor: usize,
    state: TieDecayState,
    propagator: Matrix,
    time: f64,
    alpha: f64,
    steps: usize,
    log: Option<Vec<IntervalFactor>>,
}

impl<'a> PropagatorWalk<'a> {
    pub fn new(stream: &'a EventStream, alpha: f64, options: PropagateOptions) -> Result<Self> {
        check_alpha(alpha)?;
        if stream.is_empty() {
            return Err(Error::EmptyInput);
        }
        let groups = group_event_times(stream);
        let t0 = groups[0].time;
        Ok(PropagatorWalk {
            groups,
            cursor: 0,
            state: TieDecayState::new(stream.node_count(), alpha, stream.is_directed(), t0)?,
            propagator: Matrix::identity(stream.node_count()),
            time: t0,
            alpha,
            steps: 0,
            log: options.keep_factors.then(Vec::new),
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `M(time)`.
    pub fn propagator(&self) -> &Matrix {
        &self.propagator
    }

    pub fn state(&self) -> &TieDecayState {
        &self.state
    }

    /// Events at the current time that have not been applied yet.
    pub fn pending_events(&self) -> &'a [Event] {
        match self.groups.get(self.cursor) {
            Some(g) if g.time == self.time => g.events,
            _ => &[],
        }
    }

    /// Time of the next event group after the current one.
    pub fn next_time(&self) -> Option<f64> {
        self.groups.get(self.cursor + 1).map(|g| g.time)
    }

    pub fn is_finished(&self) -> bool {
        self.cursor >= self.groups.len()
    }

    fn apply_pending(&mut self) -> Result<()> {
        if let Some(g) = self.groups.get(self.cursor) {
            if g.time == self.time {
                self.state.apply(g.events)?;
                self.cursor += 1;
            }
        }
        Ok(())
    }

    fn multiply(&mut self, end: f64) -> Result<IntervalFactor> {
        let y = factor_matrix(&self.state.laplacian(), end - self.time, self.alpha)?;
        self.propagator = self.propagator.matmul(&y);
        self.steps += 1;
        let factor = IntervalFactor { matrix: y, start: self.time, end };
        if let Some(log) = self.log.as_mut() {
            log.push(factor.clone());
        }
        self.state.advance_to(end)?;
        self.time = end;
        Ok(factor)
    }

    /// Applies the events at the current time and propagates to the next
    /// event time. Returns the factor `Y(t_n+)` used, or `None` once the
    /// last event time has been processed.
    pub fn step(&mut self) -> Result<Option<IntervalFactor>> {
        self.apply_pending()?;
        match self.groups.get(self.cursor) {
            Some(next) => {
                let end = next.time;
                self.multiply(end).map(Some)
            }
            None => Ok(None),
        }
    }

    /// Runs up to `upto` and returns `M(upto)`. When `upto` coincides with an
    /// event time the events there are not applied; `M` is continuous in time
    /// so this only matters for the tie state.
    pub fn finish_at(mut self, upto: f64) -> Result<Propagator> {
        if upto.is_nan() {
            return Err(Error::NonFinite("upto"));
        }
        if upto < self.time {
            return Err(Error::TimeTravel { from: self.time, to: upto });
        }
        while matches!(self.next_time(), Some(t) if t <= upto) {
            self.step()?;
        }
        if upto > self.time {
            self.apply_pending()?;
            self.multiply(upto)?;
        }
        Ok(Propagator { matrix: self.propagator, time: self.time, steps: self.steps, factors: self.log })
    }
}

/// `M(upto)` for the stream.
pub fn propagate(stream: &EventStream, alpha: f64, upto: f64) -> Result<Propagator> {
    propagate_with(stream, alpha, upto, PropagateOptions::default())
}

pub fn propagate_with(stream: &EventStream, alpha: f64, upto: f64, options: PropagateOptions) -> Result<Propagator> {
    PropagatorWalk::new(stream, alpha, options)?.finish_at(upto)
}

/// Runs the stream to `upto`, calling `visit(t, x)` at the first event
/// time, at every later event time up to `upto`, and at `upto`.
fn drive_opinions(
    x0: &[f64],
    stream: &EventStream,
    alpha: f64,
    upto: f64,
    mut visit: impl FnMut(f64, &[f64]),
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if x0.len() != stream.node_count() {
        return Err(Error::DimensionMismatch { expected: stream.node_count(), got: x0.len() });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial opinions"));
    }
    if stream.is_empty() {
        return Err(Error::EmptyInput);
    }
    let groups = group_event_times(stream);
    let mut state = TieDecayState::new(stream.node_count(), alpha, stream.is_directed(), groups[0].time)?;
    if upto.is_nan() || upto < state.time() {
        return Err(Error::TimeTravel { from: state.time(), to: upto });
    }
    let mut x = x0.to_vec();
    visit(state.time(), &x);
    for (k, g) in groups.iter().enumerate() {
        state.apply(g.events)?;
        let end = match groups.get(k + 1) {
            Some(next) if next.time <= upto => next.time,
            _ => upto,
        };
        if end > state.time() {
            let y = factor_matrix(&state.laplacian(), end - state.time(), alpha)?;
            x = y.left_mul(&x);
            state.advance_to(end)?;
            visit(end, &x);
        }
        if end >= upto {
            break;
        }
    }
    Ok(x)
}

/// `x0 M(upto)`, applying one factor at a time.
pub fn evolve_opinions(x0: &[f64], stream: &EventStream, alpha: f64, upto: f64) -> Result<Vec<f64>> {
    drive_opinions(x0, stream, alpha, upto, |_, _| {})
}

/// Opinions at the first event time, each later event time up to `upto`,
/// and at `upto`.
pub fn opinion_trajectory(x0: &[f64], stream: &EventStream, alpha: f64, upto: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut out = Vec::new();
    drive_opinions(x0, stream, alpha, upto, |t, x| out.push((t, x.to_vec())))?;
    Ok(out)
}

/// Fixed-step RK4 integration of `dx/dt = -x L(t)^T` with the Laplacian
/// decayed continuously between events. Shares no code with the matrix
/// exponential path; it exists to check it.
pub fn ode_oracle(x0: &[f64], stream: &EventStream, alpha: f64, upto: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("step", format!("integration step must be positive, got {step}")));
    }
    check_alpha(alpha)?;
    if x0.len() != stream.node_count() {
        return Err(Error::DimensionMismatch { expected: stream.node_count(), got: x0.len() });
    }
    let n = x0.len();
    let groups = group_event_times(stream);
    let mut state = TieDecayState::new(n, alpha, stream.is_directed(), groups[0].time)?;
    if upto < state.time() {
        return Err(Error::TimeTravel { from: state.time(), to: upto });
    }
    let mut x = x0.to_vec();

    // dx_i/dt = -decay * sum_j L_ij x_j
    let rhs = |l: &Matrix, decay: f64, x: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let row = l.row(i);
            out[i] = -decay * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
    };

    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    for (k, g) in groups.iter().enumerate() {
        state.apply(g.events)?;
        let start = state.time();
        let end = match groups.get(k + 1) {
            Some(next) if next.time <= upto => next.time,
            _ => upto,
        };
        if end > start {
            let l = state.laplacian().into_matrix();
            let span = end - start;
            let count = libm::ceil(span / step).max(1.0) as usize;
            let h = span / count as f64;
            for s in 0..count {
                let t = s as f64 * h;
                let d0 = libm::exp(-alpha * t);
                let dh = libm::exp(-alpha * (t + 0.5 * h));
                let d1 = libm::exp(-alpha * (t + h));
                rhs(&l, d0, &x, &mut k1);
                for i in 0..n {
                    tmp[i] = x[i] + 0.5 * h * k1[i];
                }
                rhs(&l, dh, &tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = x[i] + 0.5 * h * k2[i];
                }
                rhs(&l, dh, &tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = x[i] + h * k3[i];
                }
                rhs(&l, d1, &tmp, &mut k4);
                for i in 0..n {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
            state.advance_to(end)?;
        }
        if end >= upto {
            break;
        }
    }
    Ok(x)
}

/// Column-normalized transition matrix of the discrete-time DeGroot model.
#[derive(Debug, Clone, PartialEq)]
pub struct DeGrootTransition {
    pub matrix: Matrix,
    pub step: usize,
}

/// `B_ij = A_ij / sum_i A_ij`. A node with no incoming ties gets an identity
/// column and keeps its opinion.
pub fn degroot_transition(state: &TieDecayState) -> DeGrootTransition {
    normalize_columns(state.weights(), 0)
}

fn normalize_columns(a: &Matrix, step: usize) -> DeGrootTransition {
    let n = a.rows();
    let sums = a.column_sums();
    let mut b = Matrix::zeros(n, n);
    for (j, &s) in sums.iter().enumerate() {
        if s > 0.0 {
            for i in 0..n {
                b[(i, j)] = a[(i, j)] / s;
            }
        } else {
            b[(j, j)] = 1.0;
        }
    }
    DeGrootTransition { matrix: b, step }
}

/// Discrete-time DeGroot dynamics on the tie-decay adjacency sampled every
/// `delta_t`: at step `n` the adjacency decays by `exp(-alpha delta_t)`,
/// receives the events whose time floors to `n delta_t`, is column-normalized
/// and applied to `y`. Returns `y` after `steps` transitions.
pub fn degroot_run(y_init: &[f64], stream: &EventStream, alpha: f64, delta_t: f64, steps: usize) -> Result<Vec<f64>> {
    Ok(degroot_trajectory(y_init, stream, alpha, delta_t, steps)?.pop().unwrap_or_default())
}

/// All intermediate opinion vectors of [`degroot_run`], starting with `y_init`.
pub fn degroot_trajectory(
    y_init: &[f64],
    stream: &EventStream,
    alpha: f64,
    delta_t: f64,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    check_alpha(alpha)?;
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::param("delta_t", format!("step length must be positive, got {delta_t}")));
    }
    let n = stream.node_count();
    if y_init.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y_init.len() });
    }
    let decay = libm::exp(-alpha * delta_t);
    let mut adjacency = Matrix::zeros(n, n);
    let mut y = y_init.to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y.clone());
    let events = stream.events();
    let mut next_event = 0;
    for step in 0..steps {
        adjacency.scale_in_place(decay);
        while next_event < events.len() {
            let e = &events[next_event];
            let slot = libm::floor(e.time / delta_t);
            if slot > step as f64 {
                break;
            }
            let (i, j) = (e.source as usize, e.target as usize);
            adjacency[(i, j)] += 1.0;
            if !stream.is_directed() {
                adjacency[(j, i)] += 1.0;
            }
            next_event += 1;
        }
        let b = normalize_columns(&adjacency, step);
        y = b.matrix.left_mul(&y);
        out.push(y.clone());
    }
    Ok(out)
}

/// The interval factor between two event times viewed as a DeGroot
/// transition.
pub fn degroot_from_laplacian(laplacian: &Laplacian, t_prev: f64, t_next: f64, alpha: f64) -> Result<DeGrootTransition> {
    if t_next < t_prev {
        return Err(Error::TimeTravel { from: t_prev, to: t_next });
    }
    Ok(DeGrootTransition { matrix: factor_matrix(laplacian, t_next - t_prev, alpha)?, step: 0 })
}
