//! Design and simulation tools for qubits built from electric dipolar
//! molecules librating in a uniform electric field.
//!
//! The two lowest pendulum states of a polar molecule form the qubit. The
//! crate computes the pendulum spectrum, the spontaneous-emission lifetime,
//! the field needed to freeze out thermal excitation, Rydberg-blockade
//! parameters, and simulates amplitude damping and the blockade phase gate.
//!
//! Everything is computed in SI units with angular frequencies in rad/s.
//! Debye, V/µm and Hz only appear at the I/O boundary, see [`physconst`].

pub mod cli;
pub mod coherence;
pub mod dynamics;
mod error;
pub mod physconst;
pub mod rydberg;
pub mod spectrum;

pub use error::{Error, Result};
