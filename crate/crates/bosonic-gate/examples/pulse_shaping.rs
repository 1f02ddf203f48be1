// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Fourier-limited waveform synthesis: draws seeded random coefficients,
//! discretizes them, exports the CSV, and verifies that the spectrum stays
//! inside the f_max budget.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example pulse_shaping
//! ```

use bosonic_gate::pulse::{params_to_json, random_params, synthesize};

fn main() -> bosonic_gate::Result<()> {
    let f_max_mhz = 30.0;
    let t_gate = 1e-6;
    let n_steps = 500;
    let m = 30; // ceil(f_max T): the Slepian degree-of-freedom floor
    let u_max = [20.0, 20.0, 3.0, 3.0];

    let params = random_params(m, f_max_mhz, t_gate, n_steps, &u_max, 42)?;
    let waveform = synthesize(&params);

    println!(
        "{} parameters per channel, {} channels, {} steps of {:.1} ns",
        2 * m + 1,
        4,
        n_steps,
        waveform.dt * 1e9
    );

    // out-of-band power via a plain DFT of the cavity-I channel
    let n = waveform.n_steps();
    let mut in_band = 0.0f64;
    let mut out_band = 0.0f64;
    for bin in 0..n / 2 {
        let f_mhz = bin as f64 / (t_gate * 1e6);
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..n {
            let phase = -2.0 * std::f64::consts::PI * (bin * j) as f64 / n as f64;
            re += waveform.amplitudes[2][j] * phase.cos();
            im += waveform.amplitudes[2][j] * phase.sin();
        }
        if f_mhz <= f_max_mhz {
            in_band += re * re + im * im;
        } else {
            out_band += re * re + im * im;
        }
    }
    println!("cavity-I spectral power: in-band {in_band:.4e}, out-of-band {out_band:.4e}");

    let out = std::path::Path::new("out/pulse_shaping");
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("waveform.csv"), waveform.to_csv())?;
    std::fs::write(out.join("params.json"), params_to_json(&params)?)?;
    println!("wrote {}", out.join("waveform.csv").display());
    println!("wrote {}", out.join("params.json").display());
    Ok(())
}
