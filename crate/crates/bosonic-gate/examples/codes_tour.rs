// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Tour of the bosonic encodings: codewords, error words, mean photon
//! numbers, and the logical gates defined on them.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example codes_tour
//! ```

use bosonic_gate::codes::{build_code, logical_unitary, CodeKind, GateKind};
use bosonic_gate::hilbert::make_space;
use num_complex::Complex64;

fn dominant_fock(v: &nalgebra::DVector<Complex64>) -> Vec<(usize, f64)> {
    let mut entries: Vec<(usize, f64)> = v
        .iter()
        .enumerate()
        .map(|(n, a)| (n, a.norm_sqr()))
        .filter(|&(_, p)| p > 1e-6)
        .collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    entries.truncate(6);
    entries
}

fn main() -> bosonic_gate::Result<()> {
    let cavity_dim = 30;
    let space = make_space(2, cavity_dim)?;

    let alpha = Complex64::new(3.0f64.sqrt(), 0.0);
    for kind in [
        CodeKind::Bin11,
        CodeKind::Bin22,
        CodeKind::Cat4 { alpha },
    ] {
        let code = build_code(kind, cavity_dim)?;
        println!("== {} ==", kind.label());
        println!("mean photon number: {:.4}", code.mean_photon());

        let (zero, one) = code.codewords();
        println!("|0_L> Fock weights: {:?}", dominant_fock(zero));
        println!("|1_L> Fock weights: {:?}", dominant_fock(one));
        let (zero_e, one_e) = code.error_words();
        println!("|0_E> Fock weights: {:?}", dominant_fock(zero_e));
        println!("|1_E> Fock weights: {:?}", dominant_fock(one_e));

        // the recovery gate undoes a photon loss on any codespace state
        let recovery = logical_unitary(&code, &space, GateKind::Recovery);
        let damaged = code.embed_with_ground(&space, zero_e);
        let repaired = recovery.target_unitary().apply(damaged.amplitudes());
        let ideal = code.embed_with_ground(&space, zero);
        let overlap = ideal.amplitudes().dotc(&repaired).norm_sqr();
        println!("recovery |0_E> -> |0_L| overlap: {overlap:.12}");

        // codespace projector: rank two, living under |g>
        let p = code.codespace_projector(&space);
        println!("codespace projector trace: {:.6}\n", p.matrix().trace().re);
    }
    Ok(())
}
