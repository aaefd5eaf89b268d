//! Shot-based state-vector simulation of protocols that measure distances
//! between quantum states and the speed of their evolution.
//!
//! * [`sim`]: the simulator substrate (state vectors, gates, circuits,
//!   transpilation, sampling, QASM).
//! * [`protocols`]: overlap estimation by circuit inversion, Pauli-string
//!   expectation values, pure-state and Hilbert–Schmidt distances, and the
//!   energy-variance evolution speed.
//! * [`models`]: the spin-½, cat/factorized, Ising and mixed-state examples
//!   with their closed-form values.
//! * [`noise`]: readout and depolarizing noise applied at sampling time.

pub mod error;
pub mod models;
pub mod noise;
pub mod protocols;
pub mod sim;

pub use error::{Error, Result};
