//! Evolutionary synthesis of small quantum circuits.
//!
//! Circuits are encoded as integer chromosomes, simulated exactly on dense
//! statevectors, and scored by one of three fitness functions: KL divergence
//! against an elementary cellular-automaton update table, the Meyer-Wallach
//! global entanglement measure, or the summed single-qubit von Neumann
//! entropy. The [`harness`] module drives reproducible multi-run experiments.

pub mod density;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod fitness;
pub mod genome;
pub mod harness;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
