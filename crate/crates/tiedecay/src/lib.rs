//! Experiments on opinion dynamics over tie-decay networks.
//!
//! This crate adds file IO, CSV output, configuration and the `tiedecay`
//! command-line tool on top of [`tiedecay_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;

pub use error::{Error, Result};
pub use tiedecay_core;
