// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Watches a gate act on the cavity: optimizes a short Hadamard, then
//! exports Wigner-function snapshots of the reduced cavity state along the
//! trajectory together with the entanglement-entropy timecourse. The
//! transmon and cavity disentangle at the end of the gate, after passing
//! through strongly entangled intermediate states.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example wigner_snapshots
//! ```

use bosonic_gate::codes::{build_code, logical_unitary, CodeKind, GateKind};
use bosonic_gate::diagnostics::wigner_grid;
use bosonic_gate::dynamics::{propagate_closed, TrajectoryStates};
use bosonic_gate::grape::{optimize_seeded, ConstraintPreset, OptimizationProblem};
use bosonic_gate::hilbert::make_space;

fn main() -> bosonic_gate::Result<()> {
    let space = make_space(2, 30)?;
    let code = build_code(CodeKind::Bin11, 30)?;
    let target = logical_unitary(&code, &space, GateKind::Hadamard);
    let chi = -2.0 * std::f64::consts::PI * 2.0e6;

    // a shortened budget keeps this example quick; the pulse is imperfect
    // but the structure of the evolution is already the interesting part
    let mut problem = OptimizationProblem::new(
        space,
        code.clone(),
        target.clone(),
        chi,
        0.8e-6,
        ConstraintPreset::standard(),
    )?;
    problem.stop.max_iterations = 250;
    println!("optimizing a 0.8 us Hadamard (up to 250 iterations)...");
    let gate = optimize_seeded(&problem, 11)?;
    println!("gate error {:.3e}", gate.cost_terms.gate_error);

    let space = problem.space;
    let psi0 = code.embed_with_ground(&space, code.codewords().0);
    let traj = propagate_closed(&gate.waveform, &space, chi, &psi0, 100)?;

    let out = std::path::Path::new("out/wigner_snapshots");
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("trajectory.csv"), traj.to_csv())?;

    let states = match &traj.states {
        TrajectoryStates::Pure(v) => v,
        TrajectoryStates::Mixed(_) => unreachable!(),
    };
    let axis: Vec<f64> = (0..61).map(|i| -3.0 + 0.1 * i as f64).collect();
    for (state, sample) in states.iter().zip(&traj.samples) {
        let cavity = state.to_density_matrix().partial_trace_transmon(&space);
        let grid = wigner_grid(&cavity, &axis, &axis)?;
        let name = format!("wigner_{:05.0}ns.csv", sample.time * 1e9);
        let mut csv = String::from("x,p,w\n");
        for (i, &x) in grid.xs.iter().enumerate() {
            for (j, &p) in grid.ps.iter().enumerate() {
                csv.push_str(&format!("{x:.4},{p:.4},{:.8}\n", grid.values[i][j]));
            }
        }
        std::fs::write(out.join(&name), csv)?;
        println!(
            "t = {:6.1} ns: entropy {:.4}, mean photon {:.4}, W origin {:+.4} -> {}",
            sample.time * 1e9,
            sample.entropy.unwrap(),
            sample.mean_photon,
            grid.values[30][30],
            name,
        );
    }
    Ok(())
}
