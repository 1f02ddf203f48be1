// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad master-equation integration.
//!
//! d rho / dt = -i [H(t), rho] + sum_k gamma_k (L_k rho L_k^dag
//!              - {L_k^dag L_k, rho} / 2)
//!
//! Fixed-step RK4 over the density matrix with `substeps` stages per
//! control step. Every right-hand side is exactly traceless, so trace
//! drift only reflects roundoff or instability; a drifting step is retried
//! with doubled substeps before giving up.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_static_hamiltonian, control_generators, photon_number, transmon_excitation,
};
use crate::hilbert::SpaceDescriptor;
use crate::linalg::CMatrix;
use crate::propagator::AssembledHamiltonian;
use crate::pulse::{Waveform, NUM_CONTROLS};
use crate::states::DensityMatrix;

use super::{
    DecoherenceChannel, Trajectory, TrajectorySample, TrajectoryStates, LEAKAGE_LEVELS,
    LEAKAGE_THRESHOLD,
};

#[derive(Debug, Clone, Copy)]
pub struct OpenOptions {
    /// RK4 substeps per control step.
    pub substeps: usize,
    /// Record every `sample_stride` control steps.
    pub sample_stride: usize,
    /// Per-step trace-drift tolerance that triggers substep refinement.
    pub trace_tol: f64,
}

impl Default for OpenOptions {
    fn default() -> Self {
        OpenOptions {
            substeps: 4,
            sample_stride: usize::MAX,
            trace_tol: 1e-9,
        }
    }
}

struct Rk4Workspace {
    k1: CMatrix,
    k2: CMatrix,
    k3: CMatrix,
    k4: CMatrix,
    stage: CMatrix,
    vals: Vec<Complex64>,
}

/// Lindblad RHS into `out`.
fn lindblad_rhs(
    ham: &AssembledHamiltonian,
    vals: &[Complex64],
    channels: &[DecoherenceChannel],
    rho: &CMatrix,
    out: &mut CMatrix,
    jump_scratch: &mut CMatrix,
) {
    out.fill(crate::linalg::ZERO);
    let minus_i = Complex64::new(0.0, -1.0);
    let plus_i = Complex64::new(0.0, 1.0);
    // -i [H, rho]
    ham.left_mul_add(vals, minus_i, rho, out);
    ham.right_mul_add(vals, plus_i, rho, out);

    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let gamma = Complex64::new(ch.rate, 0.0);
        let half_gamma = Complex64::new(-0.5 * ch.rate, 0.0);
        // gamma L rho L^dag
        jump_scratch.fill(crate::linalg::ZERO);
        ch.jump().left_mul_add(gamma, rho, jump_scratch);
        ch.jump().right_mul_adjoint_add(Complex64::new(1.0, 0.0), jump_scratch, out);
        // -gamma/2 {L^dag L, rho}
        ch.jump_dag_jump().left_mul_add(half_gamma, rho, out);
        ch.jump_dag_jump().right_mul_add(half_gamma, rho, out);
    }
}

fn rk4_control_step(
    ham: &AssembledHamiltonian,
    channels: &[DecoherenceChannel],
    rho: &mut CMatrix,
    h: f64,
    substeps: usize,
    ws: &mut Rk4Workspace,
    jump_scratch: &mut CMatrix,
) {
    let dt = h / substeps as f64;
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..substeps {
        lindblad_rhs(ham, &ws.vals, channels, rho, &mut ws.k1, jump_scratch);
        ws.stage.copy_from(rho);
        ws.stage.zip_apply(&ws.k1, |s, k| *s += half * k);
        lindblad_rhs(ham, &ws.vals, channels, &ws.stage, &mut ws.k2, jump_scratch);
        ws.stage.copy_from(rho);
        ws.stage.zip_apply(&ws.k2, |s, k| *s += half * k);
        lindblad_rhs(ham, &ws.vals, channels, &ws.stage, &mut ws.k3, jump_scratch);
        ws.stage.copy_from(rho);
        ws.stage.zip_apply(&ws.k3, |s, k| *s += full * k);
        lindblad_rhs(ham, &ws.vals, channels, &ws.stage, &mut ws.k4, jump_scratch);

        // rho += dt/6 (k1 + 2 k2 + 2 k3 + k4)
        ws.k1.zip_apply(&ws.k2, |a, b| *a += two * b);
        ws.k1.zip_apply(&ws.k3, |a, b| *a += two * b);
        ws.k1.zip_apply(&ws.k4, |a, b| *a += b);
        rho.zip_apply(&ws.k1, |r, k| *r += sixth * k);
    }
}

/// Integrates the Lindblad equation under a waveform from a density-matrix
/// initial condition.
pub fn propagate_open(
    waveform: &Waveform,
    space: &SpaceDescriptor,
    chi: f64,
    rho0: &DensityMatrix,
    channels: &[DecoherenceChannel],
    options: &OpenOptions,
) -> Result<Trajectory> {
    let dim = space.total_dim();
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: rho0.dim(),
        });
    }
    let stride = options.sample_stride.max(1);
    let h0 = build_static_hamiltonian(space, chi);
    let gens = control_generators(space);
    let ham = AssembledHamiltonian::new(&h0, &gens);

    let n_full = photon_number(space);
    let e_full = transmon_excitation(space);

    let n = waveform.n_steps();
    let mut rho = rho0.matrix().clone();
    let mut ws = Rk4Workspace {
        k1: CMatrix::zeros(dim, dim),
        k2: CMatrix::zeros(dim, dim),
        k3: CMatrix::zeros(dim, dim),
        k4: CMatrix::zeros(dim, dim),
        stage: CMatrix::zeros(dim, dim),
        vals: Vec::new(),
    };
    let mut jump_scratch = CMatrix::zeros(dim, dim);
    let mut saved = CMatrix::zeros(dim, dim);

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut samples = Vec::new();
    let mut record = |j: usize, rho: &CMatrix| -> Result<()> {
        let time = j as f64 * waveform.dt;
        let dm = DensityMatrix::new(hermitize(rho))?;
        dm.validate_spectrum_with(-1e-7)?;
        let leak = dm.top_level_population(space, LEAKAGE_LEVELS);
        if leak > LEAKAGE_THRESHOLD {
            return Err(Error::TruncationLeakage {
                time_us: time * 1e6,
                population: leak,
                levels: LEAKAGE_LEVELS,
            });
        }
        samples.push(TrajectorySample {
            time,
            mean_photon: dm.expectation(n_full.matrix()).re,
            transmon_excitation: dm.expectation(e_full.matrix()).re,
            entropy: None,
        });
        times.push(time);
        states.push(dm);
        Ok(())
    };

    record(0, &rho)?;
    for j in 0..n {
        let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
        ham.step_values(&u, &mut ws.vals);

        let trace_before = rho.trace().re;
        saved.copy_from(&rho);
        let mut substeps = options.substeps.max(1);
        loop {
            rk4_control_step(&ham, channels, &mut rho, waveform.dt, substeps, &mut ws, &mut jump_scratch);
            let drift = (rho.trace().re - trace_before).abs();
            if drift <= options.trace_tol {
                break;
            }
            substeps *= 2;
            if substeps > 64 * options.substeps.max(1) {
                return Err(Error::numerical(
                    "lindblad propagation",
                    format!(
                        "trace drift {drift:.3e} at step {j} not recoverable by refinement"
                    ),
                ));
            }
            rho.copy_from(&saved);
        }

        if (j + 1) % stride == 0 || j + 1 == n {
            record(j + 1, &rho)?;
        }
    }

    Ok(Trajectory {
        times,
        states: TrajectoryStates::Mixed(states),
        samples,
    })
}

/// Symmetrizes away the anti-Hermitian roundoff accumulated by RK4.
fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ChannelKind;
    use crate::hilbert::make_space;
    use crate::states::StateVector;
    use approx::assert_relative_eq;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn fock_dm(space: &SpaceDescriptor, t: usize, n: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&StateVector::basis(space.total_dim(), space.index(t, n)))
    }

    #[test]
    fn photon_number_decays_exponentially() {
        let space = make_space(2, 8).unwrap();
        let kappa = 1e3; // 1/s
        let t_total = 1.0 / kappa;
        let w = Waveform::zeros(200, t_total);
        let channels = vec![DecoherenceChannel::new(
            ChannelKind::CavityLoss,
            kappa,
            &space,
        )];
        let rho0 = fock_dm(&space, 0, 1);
        let traj = propagate_open(
            &w,
            &space,
            -TWO_PI * 2.0e6,
            &rho0,
            &channels,
            &OpenOptions {
                sample_stride: 50,
                ..Default::default()
            },
        )
        .unwrap();
        let n_final = traj.samples.last().unwrap().mean_photon;
        let expected = (-1.0f64).exp();
        assert_relative_eq!(n_final, expected, max_relative = 1e-5);
    }

    #[test]
    fn excited_population_relaxes() {
        let space = make_space(2, 4).unwrap();
        let t1 = 100e-6;
        let w = Waveform::zeros(200, t1);
        let channels = vec![DecoherenceChannel::new(
            ChannelKind::TransmonRelaxation,
            1.0 / t1,
            &space,
        )];
        let rho0 = fock_dm(&space, 1, 0);
        let traj = propagate_open(
            &w,
            &space,
            -TWO_PI * 2.0e6,
            &rho0,
            &channels,
            &OpenOptions::default(),
        )
        .unwrap();
        let p_e = traj.samples.last().unwrap().transmon_excitation;
        assert_relative_eq!(p_e, (-1.0f64).exp(), max_relative = 1e-5);
    }

    #[test]
    fn coherence_decays_at_t2_rate() {
        let space = make_space(2, 4).unwrap();
        let t1 = 100e-6;
        let t_phi = 25e-6;
        let t_total = 20e-6;
        let w = Waveform::zeros(100, t_total);
        let channels = vec![
            DecoherenceChannel::new(ChannelKind::TransmonRelaxation, 1.0 / t1, &space),
            DecoherenceChannel::new(ChannelKind::TransmonDephasing, 1.0 / t_phi, &space),
        ];
        // (|g> + |e>)/sqrt(2) (x) |0>
        let mut v = crate::linalg::CVector::zeros(space.total_dim());
        v[space.index(0, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[space.index(1, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho0 = DensityMatrix::from_pure(&StateVector::new(v).unwrap());
        let traj = propagate_open(&w, &space, -TWO_PI * 2.0e6, &rho0, &channels, &OpenOptions::default())
            .unwrap();
        let rho_f = traj.final_mixed().unwrap();
        let coherence = rho_f.matrix()[(space.index(0, 0), space.index(1, 0))].norm();
        let expected = 0.5 * (-t_total * (0.5 / t1 + 1.0 / t_phi)).exp();
        assert_relative_eq!(coherence, expected, max_relative = 1e-5);
    }

    #[test]
    fn trace_preserved_through_driven_evolution() {
        let space = make_space(2, 8).unwrap();
        let mut w = Waveform::zeros(100, 200e-9);
        for j in 0..100 {
            w.amplitudes[0][j] = 8.0 * (j as f64 * 0.1).sin();
            w.amplitudes[2][j] = 2.0 * (j as f64 * 0.07).cos();
        }
        let rates = crate::dynamics::DecoherenceRates::reference_device();
        let channels = rates.channels(&space);
        let rho0 = fock_dm(&space, 0, 2);
        let traj = propagate_open(
            &w,
            &space,
            -TWO_PI * 2.0e6,
            &rho0,
            &channels,
            &OpenOptions {
                sample_stride: 10,
                ..Default::default()
            },
        )
        .unwrap();
        for dm in match &traj.states {
            TrajectoryStates::Mixed(v) => v,
            _ => unreachable!(),
        } {
            assert!((dm.trace().re - 1.0).abs() < 1e-7);
            dm.validate_spectrum().unwrap();
        }
    }

    #[test]
    fn thermal_channel_excites_ground_state() {
        let space = make_space(2, 4).unwrap();
        let t1 = 100e-6;
        let n_th = 0.01;
        let w = Waveform::zeros(100, 50e-6);
        let channels = vec![
            DecoherenceChannel::new(ChannelKind::TransmonRelaxation, 1.0 / t1, &space),
            DecoherenceChannel::new(ChannelKind::TransmonThermal, n_th / t1, &space),
        ];
        let rho0 = fock_dm(&space, 0, 0);
        let traj = propagate_open(&w, &space, -TWO_PI * 2.0e6, &rho0, &channels, &OpenOptions::default())
            .unwrap();
        let p_e = traj.samples.last().unwrap().transmon_excitation;
        assert!(p_e > 1e-4, "thermal excitation did not appear: {p_e:.3e}");
        // far below the steady-state ceiling n_th / (1 + 2 n_th)
        assert!(p_e < n_th);
    }
}
