// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! The full error-budget loop on one Hadamard gate: synthesize the pulse,
//! evaluate the intrinsic error, run the Lindblad simulation with the
//! standard device rates, break the error into per-channel susceptibility
//! contributions, and compare r_L against r0 + r'.
//!
//! Takes a couple of minutes on two cores.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example hadamard_error_budget
//! ```

use bosonic_gate::codes::{build_code, logical_unitary, CodeKind, GateKind};
use bosonic_gate::dynamics::{
    gate_fidelity_closed, gate_fidelity_open, DecoherenceRates, OpenOptions,
};
use bosonic_gate::error_model::SusceptibilityAnalysis;
use bosonic_gate::grape::{optimize_seeded, ConstraintPreset, OptimizationProblem};
use bosonic_gate::hilbert::make_space;

fn main() -> bosonic_gate::Result<()> {
    let space = make_space(2, 30)?;
    let code = build_code(CodeKind::Bin11, 30)?;
    let target = logical_unitary(&code, &space, GateKind::Hadamard);
    let chi = -2.0 * std::f64::consts::PI * 2.0e6;

    let mut problem = OptimizationProblem::new(
        space,
        code.clone(),
        target.clone(),
        chi,
        1e-6,
        ConstraintPreset::standard(),
    )?;
    problem.stop.max_iterations = 600;

    println!("optimizing a 1 us Hadamard (up to 600 iterations)...");
    let gate = optimize_seeded(&problem, 2)?;
    println!(
        "gate error {:.3e} after {} iterations",
        gate.cost_terms.gate_error, gate.iterations
    );

    let space = problem.space;
    let (_, r0) = gate_fidelity_closed(&gate.waveform, &target, &code, &space, chi)?;
    println!("intrinsic error r0 = {r0:.4e}");

    // kappa^-1 = 1 ms, T1 = 100 us, Tphi = 25 us, n_th = 0.01
    let rates = DecoherenceRates::reference_device();
    let channels = rates.channels(&space);
    let (_, r_l) = gate_fidelity_open(
        &gate.waveform,
        &target,
        &code,
        &space,
        chi,
        &channels,
        &OpenOptions::default(),
    )?;
    println!("Lindblad error r_L = {:.4} %", r_l * 100.0);

    let analysis = SusceptibilityAnalysis::new(&gate.waveform, &target, &code, &space, chi)?;
    let report = analysis.report(&channels, Some(r0), Some(r_l));
    println!("\nchannel                   s_k       p_k       l'_k   T*gamma*s");
    for ch in &report.channels {
        println!(
            "{:<24} {:>7.4}   {:>7.4}   {:>7.4}   {:.4e}",
            ch.kind.label(),
            ch.susceptibility,
            ch.error_probability,
            ch.unnormalized_fidelity,
            report.gate_time_us * 1e-6 * ch.rate * ch.susceptibility,
        );
    }
    println!(
        "\nr' = {:.4} %,  r0 + r' = {:.4} %,  r_L = {:.4} %",
        report.decoherence_error * 100.0,
        (r0 + report.decoherence_error) * 100.0,
        r_l * 100.0
    );
    println!(
        "model residual r_L - (r0 + r') = {:+.4e}",
        report.residual.unwrap()
    );
    Ok(())
}
