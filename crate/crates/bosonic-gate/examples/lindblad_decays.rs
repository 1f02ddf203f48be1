// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Checks the Lindblad integrator against textbook decay laws: photon
//! number under cavity loss, excited population under relaxation, and the
//! off-diagonal coherence under combined relaxation and dephasing.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example lindblad_decays
//! ```

use bosonic_gate::dynamics::{propagate_open, ChannelKind, DecoherenceChannel, OpenOptions};
use bosonic_gate::hilbert::make_space;
use bosonic_gate::pulse::Waveform;
use bosonic_gate::states::{DensityMatrix, StateVector};
use num_complex::Complex64;

fn main() -> bosonic_gate::Result<()> {
    let space = make_space(2, 8)?;
    let chi = -2.0 * std::f64::consts::PI * 2.0e6;
    let options = OpenOptions {
        sample_stride: 40,
        ..Default::default()
    };

    // photon loss: <n>(t) = exp(-kappa t)
    let kappa = 1e3;
    let w = Waveform::zeros(200, 1.0 / kappa);
    let loss = vec![DecoherenceChannel::new(ChannelKind::CavityLoss, kappa, &space)];
    let fock1 = DensityMatrix::from_pure(&StateVector::basis(space.total_dim(), space.index(0, 1)));
    let traj = propagate_open(&w, &space, chi, &fock1, &loss, &options)?;
    let n_final = traj.samples.last().unwrap().mean_photon;
    println!(
        "photon number after one cavity lifetime: {n_final:.8}  (exp(-1) = {:.8}, rel dev {:.1e})",
        (-1.0f64).exp(),
        (n_final / (-1.0f64).exp() - 1.0).abs()
    );

    // relaxation: P_e(t) = exp(-t / T1)
    let t1 = 100e-6;
    let w = Waveform::zeros(200, t1);
    let relax = vec![DecoherenceChannel::new(
        ChannelKind::TransmonRelaxation,
        1.0 / t1,
        &space,
    )];
    let excited = DensityMatrix::from_pure(&StateVector::basis(space.total_dim(), space.index(1, 0)));
    let traj = propagate_open(&w, &space, chi, &excited, &relax, &options)?;
    let p_e = traj.samples.last().unwrap().transmon_excitation;
    println!(
        "excited population after one T1:         {p_e:.8}  (exp(-1) = {:.8}, rel dev {:.1e})",
        (-1.0f64).exp(),
        (p_e / (-1.0f64).exp() - 1.0).abs()
    );

    // T2: |rho_ge|(t) = exp(-t (1/(2 T1) + 1/Tphi)) / 2
    let t_phi = 25e-6;
    let t2 = 1.0 / (0.5 / t1 + 1.0 / t_phi);
    let w = Waveform::zeros(200, t2);
    let both = vec![
        DecoherenceChannel::new(ChannelKind::TransmonRelaxation, 1.0 / t1, &space),
        DecoherenceChannel::new(ChannelKind::TransmonDephasing, 1.0 / t_phi, &space),
    ];
    let mut v = nalgebra::DVector::zeros(space.total_dim());
    v[space.index(0, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[space.index(1, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = DensityMatrix::from_pure(&StateVector::new(v)?);
    let traj = propagate_open(&w, &space, chi, &plus, &both, &options)?;
    let rho = traj.final_mixed().unwrap();
    let coherence = rho.matrix()[(space.index(0, 0), space.index(1, 0))].norm();
    println!(
        "coherence after one T2:                  {coherence:.8}  (exp(-1)/2 = {:.8}, rel dev {:.1e})",
        0.5 * (-1.0f64).exp(),
        (coherence / (0.5 * (-1.0f64).exp()) - 1.0).abs()
    );
    Ok(())
}
