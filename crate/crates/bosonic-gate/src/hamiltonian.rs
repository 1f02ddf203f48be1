// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Static and control Hamiltonians of the dispersively coupled
//! transmon-cavity system.
//!
//! The static part is `chi * a^dagger a |e><e|` with `chi` in angular units
//! (rad/s). The four control generators are dimensionless; drive amplitudes
//! multiply them as `2 pi * u` with `u` an ordinary frequency.

use num_complex::Complex64;

use crate::hilbert::{
    annihilation, excited_projector, number_op, sigma_x, sigma_y, SpaceDescriptor,
};
use crate::linalg::CMatrix;
use crate::operator::Operator;

/// Conversion from an ordinary-frequency amplitude in MHz to rad/s.
pub const MHZ_TO_ANGULAR: f64 = 2.0 * std::f64::consts::PI * 1e6;

/// Dispersive-shift Hamiltonian `chi * n |e><e|`, diagonal in the product
/// basis. `chi` is angular (rad/s); configs quote chi/2pi in MHz.
pub fn build_static_hamiltonian(space: &SpaceDescriptor, chi: f64) -> Operator {
    assert!(chi.is_finite(), "chi must be finite");
    let dim = space.total_dim();
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..space.cavity_dim() {
        let i = space.index(1, n);
        m[(i, i)] = Complex64::new(chi * n as f64, 0.0);
    }
    Operator::new_hermitian(m).expect("static Hamiltonian is diagonal")
}

/// The four control channels, in the fixed order used by waveforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlChannel {
    TransmonI = 0,
    TransmonQ = 1,
    CavityI = 2,
    CavityQ = 3,
}

pub const CONTROL_CHANNELS: [ControlChannel; 4] = [
    ControlChannel::TransmonI,
    ControlChannel::TransmonQ,
    ControlChannel::CavityI,
    ControlChannel::CavityQ,
];

impl ControlChannel {
    pub fn label(&self) -> &'static str {
        match self {
            ControlChannel::TransmonI => "transmon_I",
            ControlChannel::TransmonQ => "transmon_Q",
            ControlChannel::CavityI => "cavity_I",
            ControlChannel::CavityQ => "cavity_Q",
        }
    }

    pub fn is_transmon(&self) -> bool {
        matches!(self, ControlChannel::TransmonI | ControlChannel::TransmonQ)
    }
}

/// Control generators {sigma_x/2, sigma_y/2, (a+a^dag)/2, (a-a^dag)/2i},
/// each lifted to the full space. All four are Hermitian.
pub fn control_generators(space: &SpaceDescriptor) -> [Operator; 4] {
    let half = Complex64::new(0.5, 0.0);
    let tx = sigma_x(space.transmon_dim()) * half;
    let ty = sigma_y(space.transmon_dim()) * half;
    let a = annihilation(space.cavity_dim());
    let cav_i = (&a + a.adjoint()) * half;
    // (a - a^dag) / 2i
    let cav_q = (&a - a.adjoint()) * Complex64::new(0.0, -0.5);

    let lift = |m: CMatrix, transmon: bool| -> Operator {
        let full = if transmon {
            space.lift_transmon(&m)
        } else {
            space.lift_cavity(&m)
        };
        Operator::new_hermitian(full).expect("control generators are Hermitian")
    };
    [
        lift(tx, true),
        lift(ty, true),
        lift(cav_i, false),
        lift(cav_q, false),
    ]
}

/// Photon-number operator lifted to the full space.
pub fn photon_number(space: &SpaceDescriptor) -> Operator {
    Operator::new_hermitian(space.lift_cavity(&number_op(space.cavity_dim())))
        .expect("number operator is diagonal")
}

/// Transmon excited-state projector lifted to the full space.
pub fn transmon_excitation(space: &SpaceDescriptor) -> Operator {
    Operator::new_hermitian(space.lift_transmon(&excited_projector(space.transmon_dim())))
        .expect("projector is diagonal")
}
