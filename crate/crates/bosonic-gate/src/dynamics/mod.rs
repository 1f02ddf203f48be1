// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Time-domain simulation of driven gates, closed and open.
//!
//! Closed evolution reuses the exact step exponentials of
//! [`crate::propagator`]; open evolution integrates the Lindblad equation
//! with fixed-step RK4 on the density matrix, four substeps per control
//! step, refining when the trace drifts. Both see the same
//! piecewise-constant Hamiltonian, so the open dynamics reduce to the
//! closed ones as the rates go to zero.

mod closed;
mod fidelity;
mod lindblad;

pub use closed::propagate_closed;
pub use fidelity::{gate_fidelity_closed, gate_fidelity_open};
pub use lindblad::{propagate_open, OpenOptions};

use serde::Serialize;

use crate::hilbert::{
    annihilation, sigma_minus, sigma_plus, sigma_z, SpaceDescriptor,
};
use crate::operator::SparseOp;
use crate::states::{DensityMatrix, StateVector};

/// Decoherence channel kinds with their fixed jump operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Cavity photon loss, jump a, rate kappa.
    CavityLoss,
    /// Transmon relaxation, jump sigma_-, rate 1/T1.
    TransmonRelaxation,
    /// Transmon pure dephasing, jump sigma_z/sqrt(2), rate 1/T_phi.
    TransmonDephasing,
    /// Transmon thermal excitation, jump sigma_+, rate n_th/T1.
    TransmonThermal,
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::CavityLoss => "cavity_loss",
            ChannelKind::TransmonRelaxation => "transmon_relaxation",
            ChannelKind::TransmonDephasing => "transmon_dephasing",
            ChannelKind::TransmonThermal => "transmon_thermal",
        }
    }
}

/// A jump operator with its rate (1/s), lifted to the full space.
#[derive(Debug, Clone)]
pub struct DecoherenceChannel {
    pub kind: ChannelKind,
    pub rate: f64,
    jump: SparseOp,
    jump_dag_jump: SparseOp,
}

impl DecoherenceChannel {
    pub fn new(kind: ChannelKind, rate: f64, space: &SpaceDescriptor) -> Self {
        assert!(rate >= 0.0, "decoherence rate must be nonnegative");
        let factor = match kind {
            ChannelKind::CavityLoss => space.lift_cavity(&annihilation(space.cavity_dim())),
            ChannelKind::TransmonRelaxation => {
                space.lift_transmon(&sigma_minus(space.transmon_dim()))
            }
            ChannelKind::TransmonDephasing => space.lift_transmon(
                &(sigma_z(space.transmon_dim())
                    * num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)),
            ),
            ChannelKind::TransmonThermal => space.lift_transmon(&sigma_plus(space.transmon_dim())),
        };
        let jump = SparseOp::from_dense(&factor, 0.0);
        let jd = jump.adjoint();
        let jdj = SparseOp::from_dense(&(jd.to_dense() * jump.to_dense()), 1e-300);
        DecoherenceChannel {
            kind,
            rate,
            jump,
            jump_dag_jump: jdj,
        }
    }

    pub fn jump(&self) -> &SparseOp {
        &self.jump
    }

    pub fn jump_dag_jump(&self) -> &SparseOp {
        &self.jump_dag_jump
    }
}

/// Reference device lifetimes, converted to channel rates on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoherenceRates {
    /// Cavity lifetime 1/kappa in seconds.
    pub kappa_inv: f64,
    /// Transmon relaxation time in seconds.
    pub t1: f64,
    /// Transmon pure-dephasing time in seconds.
    pub t_phi: f64,
    /// Thermal occupation of the transmon bath.
    pub n_th: f64,
}

impl DecoherenceRates {
    pub fn reference_device() -> Self {
        DecoherenceRates {
            kappa_inv: 1e-3,
            t1: 100e-6,
            t_phi: 25e-6,
            n_th: 0.01,
        }
    }

    /// All four channels; zero-rate channels are kept (they contribute
    /// nothing but stay reportable).
    pub fn channels(&self, space: &SpaceDescriptor) -> Vec<DecoherenceChannel> {
        vec![
            DecoherenceChannel::new(ChannelKind::CavityLoss, 1.0 / self.kappa_inv, space),
            DecoherenceChannel::new(ChannelKind::TransmonRelaxation, 1.0 / self.t1, space),
            DecoherenceChannel::new(ChannelKind::TransmonDephasing, 1.0 / self.t_phi, space),
            DecoherenceChannel::new(ChannelKind::TransmonThermal, self.n_th / self.t1, space),
        ]
    }
}

/// Per-sample diagnostics captured along a trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectorySample {
    pub time: f64,
    pub mean_photon: f64,
    pub transmon_excitation: f64,
    /// Transmon-cavity entanglement entropy; pure states only.
    pub entropy: Option<f64>,
}

/// Stored states of a trajectory.
#[derive(Debug, Clone)]
pub enum TrajectoryStates {
    Pure(Vec<StateVector>),
    Mixed(Vec<DensityMatrix>),
}

/// A sampled time evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: TrajectoryStates,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn final_pure(&self) -> Option<&StateVector> {
        match &self.states {
            TrajectoryStates::Pure(v) => v.last(),
            TrajectoryStates::Mixed(_) => None,
        }
    }

    pub fn final_mixed(&self) -> Option<&DensityMatrix> {
        match &self.states {
            TrajectoryStates::Mixed(v) => v.last(),
            TrajectoryStates::Pure(_) => None,
        }
    }

    /// CSV rows (t_ns, mean_photon, transmon_excitation, entropy).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_ns,mean_photon,transmon_excitation,entropy\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.6},{:.9},{:.9},{}\n",
                s.time * 1e9,
                s.mean_photon,
                s.transmon_excitation,
                s.entropy.map_or(String::new(), |e| format!("{e:.9}")),
            ));
        }
        out
    }
}

/// Cavity levels watched by the truncation-leakage monitor.
pub const LEAKAGE_LEVELS: usize = 3;
/// Population threshold above which propagation is vetoed.
pub const LEAKAGE_THRESHOLD: f64 = 0.01;
