// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level gate synthesis and error budgeting for superconducting
//! bosonic qubits.
//!
//! A logical qubit lives in a microwave cavity mode, manipulated through a
//! dispersively coupled ancilla transmon. This crate covers the full loop:
//!
//! * frequency-limited control waveforms ([`pulse`]) optimized by exact
//!   gradients through the step propagators ([`grape`]),
//! * closed (Schrodinger) and open (Lindblad) time evolution of the driven
//!   system ([`dynamics`]),
//! * binomial and cat encodings with their logical target unitaries
//!   ([`codes`]),
//! * a per-channel gate-error budget built from error susceptibilities,
//!   with achievable-error bounds ([`error_model`]).
//!
//! The `examples/` directory holds one runnable example per capability; the
//! thin `bgate` binary drives the same pipelines from declarative config
//! files.

pub mod codes;
pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod error_model;
pub mod grape;
pub mod hamiltonian;
pub mod hilbert;
pub mod linalg;
pub mod operator;
pub mod pipeline;
pub mod propagator;
pub mod pulse;
pub mod states;

pub use error::{Error, Result};
pub use hilbert::{make_space, SpaceDescriptor};
pub use operator::Operator;
pub use states::{DensityMatrix, StateVector};
