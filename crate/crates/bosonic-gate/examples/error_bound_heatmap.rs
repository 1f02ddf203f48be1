// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Sweeps the achievable-error bound over gate time and transmon dephasing
//! time, printing the reference points and the dephasing times needed to
//! reach 1.0% down to 0.6% total gate error.
//!
//! ```bash
//! cargo run --release -p bosonic-gate --example error_bound_heatmap
//! ```

use bosonic_gate::error_model::{bound_heatmap, error_bound, minimize_bound, ErrorBoundParams};

fn main() -> bosonic_gate::Result<()> {
    let params = ErrorBoundParams::bin11_defaults();

    let at_reference_point = error_bound(1e-6, &params);
    println!(
        "bound at (T = 1 us, Tphi = 25 us): {:.4} % (intrinsic {:.2e}, decoherence {:.4} %)",
        at_reference_point.total * 100.0,
        at_reference_point.intrinsic,
        at_reference_point.decoherence * 100.0
    );

    println!("\nminimum over gate time for selected dephasing times:");
    for t_phi_us in [25.0, 31.0, 37.0, 46.0, 60.0, 85.0] {
        let p = ErrorBoundParams {
            t_phi: t_phi_us * 1e-6,
            ..params
        };
        let (t_opt, v) = minimize_bound((0.1e-6, 2e-6), &p);
        println!(
            "  Tphi = {t_phi_us:>4.0} us: min {:.3} % at T = {:.0} ns",
            v.total * 100.0,
            t_opt * 1e9
        );
    }

    let t_axis: Vec<f64> = (0..96).map(|i| (0.1 + 1.9 * i as f64 / 95.0) * 1e-6).collect();
    let tphi_axis: Vec<f64> = (0..96).map(|i| (5.0 + 95.0 * i as f64 / 95.0) * 1e-6).collect();
    let heatmap = bound_heatmap(&t_axis, &tphi_axis, &params);
    let out = std::path::Path::new("out/error_bound_heatmap");
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("bound_heatmap.csv"), heatmap.to_csv())?;
    println!("\nwrote {}", out.join("bound_heatmap.csv").display());
    Ok(())
}
