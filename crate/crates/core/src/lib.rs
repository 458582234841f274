//! Ancilla-driven quantum computation with repeat-until-success synthesis.
//!
//! The model this crate simulates keeps the register untouched except through
//! one fixed two-qubit interaction with a stream of fresh ancillas.  Each
//! ancilla is prepared, coupled to the register, and measured; the measurement
//! outcome selects which unitary actually landed on the register.  Because the
//! outcome is random, gates are built *repeat-until-success* style: keep
//! firing ancillas, tracking the product of landed unitaries, until it is
//! within tolerance of the target.
//!
//! Layout:
//!
//! * [`qcore`] — dense operators, state vectors, named gates, and the metrics
//!   (trace distance on gates, axis–angle form, two-qubit phase
//!   decomposition) used to score walks.
//! * [`channel`] — turns a prepared ancilla + interaction + measurement basis
//!   into the induced Kraus branches on the register, with probabilities and
//!   per-branch unitaries.
//! * [`synth1q`] — single-qubit random walks over the branch unitaries:
//!   run-until-close trajectories, hitting-time statistics, and the finite
//!   group generated in the degenerate case.
//! * [`synth2q`] — the entangling-phase walk: each two-qubit round advances a
//!   single Ising angle by one of two increments, and synthesis is a
//!   one-dimensional walk on the circle of angles.
//! * [`protocol`] — a small program format plus an executor that runs
//!   directives against an actual register state, ancilla by ancilla,
//!   with full trajectory logging.

pub mod channel;
pub mod error;
pub mod protocol;
pub mod qcore;
pub mod synth1q;
pub mod synth2q;

pub use error::{AdqcError, Result};
