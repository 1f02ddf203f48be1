// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Gate fidelities averaged over the six cardinal evaluation states.

use rayon::prelude::*;

use crate::codes::{BosonicCode, LogicalGate};
use crate::diagnostics::state_fidelity;
use crate::error::Result;
use crate::hilbert::SpaceDescriptor;
use crate::pulse::Waveform;
use crate::states::DensityMatrix;

use super::closed::propagate_closed;
use super::lindblad::{propagate_open, OpenOptions};
use super::DecoherenceChannel;

/// Decoherence-free gate fidelity: the squared overlap between propagated
/// and ideal target states, averaged over the six cardinal inputs. Returns
/// (F0, r0 = 1 - F0).
pub fn gate_fidelity_closed(
    waveform: &Waveform,
    target: &LogicalGate,
    code: &BosonicCode,
    space: &SpaceDescriptor,
    chi: f64,
) -> Result<(f64, f64)> {
    let inputs = target.cardinal_inputs(code, space);
    let targets = target.cardinal_targets(code, space);
    let mut acc = 0.0;
    for (input, ideal) in inputs.iter().zip(&targets) {
        let traj = propagate_closed(waveform, space, chi, input, usize::MAX)?;
        let fin = traj.final_pure().expect("closed trajectory is pure");
        acc += ideal.overlap(fin).norm_sqr();
    }
    let f0 = acc / inputs.len() as f64;
    Ok((f0, 1.0 - f0))
}

/// Gate fidelity under decoherence: the Uhlmann fidelity between the
/// Lindblad-evolved density matrix and the ideal target state, averaged
/// over the six cardinal inputs. Returns (F, r_L = 1 - F).
pub fn gate_fidelity_open(
    waveform: &Waveform,
    target: &LogicalGate,
    code: &BosonicCode,
    space: &SpaceDescriptor,
    chi: f64,
    channels: &[DecoherenceChannel],
    options: &OpenOptions,
) -> Result<(f64, f64)> {
    let inputs = target.cardinal_inputs(code, space);
    let targets = target.cardinal_targets(code, space);
    let fidelities: Vec<Result<f64>> = inputs
        .par_iter()
        .zip(targets.par_iter())
        .map(|(input, ideal)| {
            let rho0 = DensityMatrix::from_pure(input);
            let traj = propagate_open(
                waveform,
                space,
                chi,
                &rho0,
                channels,
                &OpenOptions {
                    sample_stride: usize::MAX,
                    ..*options
                },
            )?;
            let rho_f = traj.final_mixed().expect("open trajectory is mixed");
            state_fidelity(&DensityMatrix::from_pure(ideal), rho_f)
        })
        .collect();
    let mut acc = 0.0;
    for f in fidelities {
        acc += f?;
    }
    let f = acc / inputs.len() as f64;
    Ok((f, 1.0 - f))
}
