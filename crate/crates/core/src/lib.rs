//! Opinion dynamics on tie-decay temporal networks.
//!
//! A tie-decay network turns a stream of time-stamped contacts into
//! continuously evolving tie strengths: every contact bumps its tie by one and
//! every tie decays exponentially at a common rate `alpha` in between. Running
//! Laplacian consensus dynamics on such a network gives a closed-form opinion
//! propagator, a time-ordered product of matrix exponentials, one per
//! interval between event times. The spectral gap of that propagator measures
//! how fast opinions approach consensus.
//!
//! This crate is `no_std` (it needs `alloc`) and holds the numerical core:
//!
//! * [`event_stream`] parses and indexes contact streams,
//! * [`tie_decay`] evolves tie strengths and their Laplacian,
//! * [`propagator`] builds interval factors and propagators, runs the
//!   continuous-time and DeGroot opinion models, and carries an RK4 oracle,
//! * [`spectral`] computes gaps, Fiedler vectors and shrinkage ratios,
//! * [`randomize`] produces the four randomized reference streams,
//! * [`aggregate`] builds the time-averaged static network.
//!
//! The dense kernels in [`linalg`], [`expm`] and [`eigen`] are self-contained.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aggregate;
pub mod eigen;
pub mod error;
pub mod event_stream;
pub mod expm;
pub mod linalg;
pub mod propagator;
pub mod randomize;
pub mod spectral;
pub mod tie_decay;

pub use error::{Error, Result};
pub use event_stream::{parse_events, EdgeEventIndex, Event, EventStream, NodeId, ParseOptions, StreamStats};
pub use linalg::Matrix;
pub use randomize::{Method, RandomizerSpec};
pub use tie_decay::{Laplacian, TieDecayState};
pub use num_complex::Complex64;
