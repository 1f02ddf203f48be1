// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Schrodinger propagation under a piecewise-constant waveform.

use crate::diagnostics::entanglement_entropy;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_static_hamiltonian, control_generators, photon_number, transmon_excitation,
};
use crate::hilbert::SpaceDescriptor;
use crate::operator::SparseOp;
use crate::propagator::TimePropagator;
use crate::pulse::{Waveform, NUM_CONTROLS};
use crate::states::StateVector;

use super::{Trajectory, TrajectorySample, TrajectoryStates, LEAKAGE_LEVELS, LEAKAGE_THRESHOLD};

/// Propagates a pure state through every control step, sampling every
/// `sample_stride` steps (the initial and final states are always kept).
///
/// Fails with `TruncationLeakage` if more than 1% of the population reaches
/// the top three cavity levels at any step.
pub fn propagate_closed(
    waveform: &Waveform,
    space: &SpaceDescriptor,
    chi: f64,
    psi0: &StateVector,
    sample_stride: usize,
) -> Result<Trajectory> {
    if psi0.dim() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            actual: psi0.dim(),
        });
    }
    let stride = sample_stride.max(1);
    let h0 = build_static_hamiltonian(space, chi);
    let gens = control_generators(space);
    let mut prop = TimePropagator::new(&h0, &gens, waveform.dt);

    let n_op = photon_number(space).to_sparse();
    let e_op = transmon_excitation(space).to_sparse();

    let n = waveform.n_steps();
    let mut psi: Vec<num_complex::Complex64> = psi0.as_slice().to_vec();
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut samples = Vec::new();

    let mut record = |j: usize, psi: &[num_complex::Complex64]| -> Result<()> {
        let state = StateVector::new(crate::linalg::CVector::from_column_slice(psi))?;
        let time = j as f64 * waveform.dt;
        samples.push(sample_of(&state, space, &n_op, &e_op, time));
        times.push(time);
        states.push(state);
        Ok(())
    };

    record(0, &psi)?;
    for j in 0..n {
        let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
        prop.step(&u, &mut psi);
        let leak = top_population(&psi, space, LEAKAGE_LEVELS);
        if leak > LEAKAGE_THRESHOLD {
            return Err(Error::TruncationLeakage {
                time_us: (j + 1) as f64 * waveform.dt * 1e6,
                population: leak,
                levels: LEAKAGE_LEVELS,
            });
        }
        if (j + 1) % stride == 0 || j + 1 == n {
            record(j + 1, &psi)?;
        }
    }

    Ok(Trajectory {
        times,
        states: TrajectoryStates::Pure(states),
        samples,
    })
}

fn top_population(psi: &[num_complex::Complex64], space: &SpaceDescriptor, levels: usize) -> f64 {
    let nc = space.cavity_dim();
    let cutoff = nc.saturating_sub(levels);
    let mut pop = 0.0;
    for t in 0..space.transmon_dim() {
        for n in cutoff..nc {
            pop += psi[space.index(t, n)].norm_sqr();
        }
    }
    pop
}

fn sample_of(
    state: &StateVector,
    space: &SpaceDescriptor,
    n_op: &SparseOp,
    e_op: &SparseOp,
    time: f64,
) -> TrajectorySample {
    TrajectorySample {
        time,
        mean_photon: n_op.quadratic_form(state.as_slice()).re,
        transmon_excitation: e_op.quadratic_form(state.as_slice()).re,
        entropy: Some(entanglement_entropy(state, space)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, CodeKind};
    use crate::grape::total_propagator;
    use crate::hilbert::make_space;
    use approx::assert_relative_eq;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn zero_waveform_keeps_codespace_state_stationary() {
        let space = make_space(2, 15).unwrap();
        let code = build_code(CodeKind::Bin11, 15).unwrap();
        let psi0 = code.embed_with_ground(&space, &code.codewords().0.clone());
        let w = Waveform::zeros(100, 1e-6);
        let traj = propagate_closed(&w, &space, -TWO_PI * 2.0e6, &psi0, 10).unwrap();
        let fin = traj.final_pure().unwrap();
        let overlap = psi0.overlap(fin).norm_sqr();
        assert_relative_eq!(overlap, 1.0, epsilon = 1e-12);
        for s in &traj.samples {
            assert_relative_eq!(s.mean_photon, 2.0, epsilon = 1e-10);
            assert!(s.transmon_excitation.abs() < 1e-12);
            assert!(s.entropy.unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn final_state_matches_total_propagator() {
        let space = make_space(2, 12).unwrap();
        let chi = -TWO_PI * 2.0e6;
        let mut w = Waveform::zeros(60, 120e-9);
        for j in 0..60 {
            w.amplitudes[0][j] = 10.0 * (j as f64 * 0.2).sin();
            w.amplitudes[2][j] = 2.0 * (j as f64 * 0.11).cos();
            w.amplitudes[3][j] = 1.5 * (j as f64 * 0.23).sin();
        }
        let psi0 = StateVector::basis(space.total_dim(), space.index(0, 2));
        let traj = propagate_closed(&w, &space, chi, &psi0, 1000).unwrap();
        let fin = traj.final_pure().unwrap();

        let u = total_propagator(&w, &space, chi);
        let expected = u.apply(psi0.amplitudes());
        let diff: f64 = fin
            .amplitudes()
            .iter()
            .zip(expected.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "deviation {diff:.3e}");
    }

    #[test]
    fn leakage_veto_triggers_on_strong_displacement() {
        let space = make_space(2, 8).unwrap();
        // hard constant displacement walks the state up the Fock ladder
        let mut w = Waveform::zeros(400, 2e-6);
        for j in 0..400 {
            w.amplitudes[2][j] = 3.0;
        }
        let psi0 = StateVector::basis(space.total_dim(), space.index(0, 0));
        let err = propagate_closed(&w, &space, -TWO_PI * 2.0e6, &psi0, 50).unwrap_err();
        assert!(matches!(err, Error::TruncationLeakage { .. }), "{err}");
    }

    #[test]
    fn norm_drift_stays_tiny_over_many_steps() {
        let space = make_space(2, 10).unwrap();
        let mut w = Waveform::zeros(500, 1e-6);
        for j in 0..500 {
            w.amplitudes[0][j] = 5.0 * (j as f64 * 0.05).sin();
            w.amplitudes[2][j] = 1.0 * (j as f64 * 0.03).cos();
        }
        let psi0 = StateVector::basis(space.total_dim(), space.index(0, 1));
        let traj = propagate_closed(&w, &space, -TWO_PI * 2.0e6, &psi0, 100).unwrap();
        let norm = traj.final_pure().unwrap().amplitudes().norm();
        assert!((norm - 1.0).abs() < 1e-10, "norm drift {:.3e}", (norm - 1.0).abs());
    }
}
