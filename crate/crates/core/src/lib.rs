//! Simulation toolkit for measurement-based topological fault tolerance on a
//! 2D qubit array.
//!
//! The crate covers the full pipeline:
//!
//! * [`chain_complex`] — cubical cells, GF(2) chains, boundary/coboundary,
//!   and the primal/dual reflection on the 3D cluster lattice.
//! * [`pauli`] — sparse signed Pauli operators, Clifford conjugation, and the
//!   stabilizer/state-vector oracles used to cross-check them.
//! * [`geometry`] — defect layouts: regions, hole pairs, surface-code checks,
//!   logical operators, and the cluster graph of a block.
//! * [`gate_verify`] — correlation surfaces and the compatibility checker
//!   that certifies a layout implements a claimed logical gate.
//! * [`schedule`] — the period-6 one-operation-per-step measurement circuit.
//! * [`noise`] — Pauli-frame simulation under circuit-level and
//!   phenomenological error models.
//! * [`decoder`] — minimum-weight perfect matching of syndrome defects and
//!   homology-class readout.
//! * [`threshold`] — Monte-Carlo logical-error-rate scans and threshold
//!   crossing estimation.
//! * [`distill`] — magic-state distillation cascade accounting.

pub mod chain_complex;
pub mod fixtures;
pub mod gate_verify;
pub mod geometry;
pub mod decoder;
pub mod distill;
pub mod gf2;
pub mod matching;
pub mod noise;
pub mod pauli;
pub mod schedule;
pub mod threshold;
pub mod statevec;
pub mod tableau;

pub use chain_complex::{Cell, Chain, Lattice, LatticeError};
pub use pauli::{CliffordGate, PauliKind, PauliOperator, Phase};
