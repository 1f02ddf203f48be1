// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Achievable-error bound and its (gate time, dephasing time) heatmap.

use super::ErrorBoundParams;

/// One bound evaluation, split into its intrinsic and decoherence parts.
#[derive(Debug, Clone, Copy)]
pub struct BoundValue {
    /// exp(-a T[us])
    pub intrinsic: f64,
    /// T (s_relax/T1 + s_dephase/Tphi + kappa s_loss n_bar)
    pub decoherence: f64,
    pub total: f64,
}

/// Evaluates the bound at one gate time (seconds).
pub fn error_bound(t_gate: f64, params: &ErrorBoundParams) -> BoundValue {
    let intrinsic = (-params.decay_per_us * t_gate * 1e6).exp();
    let decoherence = t_gate
        * (params.s_relax_min / params.t1
            + params.s_dephase_min / params.t_phi
            + params.kappa * params.s_loss_min_per_photon * params.mean_photon);
    BoundValue {
        intrinsic,
        decoherence,
        total: intrinsic + decoherence,
    }
}

/// Minimizes the bound over a gate-time window by golden-section search
/// (the bound is convex in T). Returns the optimal time and value.
pub fn minimize_bound(t_range: (f64, f64), params: &ErrorBoundParams) -> (f64, BoundValue) {
    let (mut lo, mut hi) = t_range;
    assert!(lo > 0.0 && hi > lo);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = error_bound(a, params).total;
    let mut fb = error_bound(b, params).total;
    for _ in 0..200 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = error_bound(a, params).total;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = error_bound(b, params).total;
        }
        if (hi - lo) < 1e-15 * hi.abs().max(1e-12) {
            break;
        }
    }
    let t_opt = 0.5 * (lo + hi);
    (t_opt, error_bound(t_opt, params))
}

/// Bound evaluated on a (gate time x dephasing time) grid.
#[derive(Debug, Clone)]
pub struct BoundHeatmap {
    pub t_gate_us: Vec<f64>,
    pub t_phi_us: Vec<f64>,
    /// values[i][j] at (t_gate_us[i], t_phi_us[j]).
    pub values: Vec<Vec<f64>>,
}

impl BoundHeatmap {
    /// Long-format CSV with axis headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_gate_us,t_phi_us,bound,bound_percent\n");
        for (i, &t) in self.t_gate_us.iter().enumerate() {
            for (j, &tp) in self.t_phi_us.iter().enumerate() {
                let v = self.values[i][j];
                out.push_str(&format!("{t:.6},{tp:.6},{v:.9},{:.6}\n", v * 100.0));
            }
        }
        out
    }
}

/// Sweeps the bound over gate-time and dephasing-time axes (seconds).
pub fn bound_heatmap(
    t_gate_axis: &[f64],
    t_phi_axis: &[f64],
    base: &ErrorBoundParams,
) -> BoundHeatmap {
    let values = t_gate_axis
        .iter()
        .map(|&t| {
            t_phi_axis
                .iter()
                .map(|&tp| {
                    let params = ErrorBoundParams { t_phi: tp, ..*base };
                    error_bound(t, &params).total
                })
                .collect()
        })
        .collect();
    BoundHeatmap {
        t_gate_us: t_gate_axis.iter().map(|t| t * 1e6).collect(),
        t_phi_us: t_phi_axis.iter().map(|t| t * 1e6).collect(),
        values,
    }
}
