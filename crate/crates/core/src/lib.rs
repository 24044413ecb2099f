//! Pseudo-spectral simulation and verification toolkit for the periodic 1D
//! stochastic Burgers equation driven by the half-derivative of space-time
//! white noise.
//!
//! The crate is layered:
//!
//! * [`spectral`] holds the Fourier grid, real fields, Littlewood–Paley
//!   blocks and Besov norms;
//! * [`paracalc`] implements Bony paraproducts, resonant products and the
//!   associated commutators;
//! * [`noise`] simulates the Ornstein–Uhlenbeck noise exactly per mode and
//!   builds the renormalized enhanced noise;
//! * [`dynamics`] time-steps the decomposed equation with the adaptive cutoff
//!   schedule;
//! * [`anderson`] solves the paracontrolled resolvent equation;
//! * [`cli`] drives batch experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anderson;
pub mod cli;
pub mod dynamics;
mod error;
pub mod noise;
pub mod paracalc;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
