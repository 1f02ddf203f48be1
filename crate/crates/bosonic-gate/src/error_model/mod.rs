// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Per-channel gate-error budgets.
//!
//! For a jump operator L acting during a gate, the instantaneous error
//! probability and unnormalized fidelity along the decoherence-free
//! trajectory |psi(t)> are
//!
//! ```text
//! p(t)  = <psi(t)| L^dag L |psi(t)>
//! l'(t) = |<psi(t)| L |psi(t)>|^2
//! s(t)  = p(t) - l'(t)            (>= 0 by Cauchy-Schwarz)
//! ```
//!
//! Averaging s over the gate window and the six cardinal input states gives
//! the channel's error susceptibility s_k, and the decoherence-induced gate
//! error is the weighted rate sum r' = T sum_k gamma_k s_k. The module also
//! carries the analytic idle-gate limits, ensemble statistics, the
//! empirical intrinsic-error fit, and the achievable-error bound assembled
//! from per-channel minimum susceptibilities.

mod analytic;
mod bound;
mod stats;
mod susceptibility;

pub use analytic::{
    idle_susceptibility, sigma_z_moment_stats, two_level_susceptibility, SigmaZMoments,
};
pub use bound::{bound_heatmap, error_bound, minimize_bound, BoundHeatmap, BoundValue};
pub use stats::{ensemble_stats, fit_intrinsic_decay, EnsembleStats};
pub use susceptibility::{model_residual, SusceptibilityAnalysis};

use serde::Serialize;

use crate::dynamics::ChannelKind;

/// p, l', s sampled at every control step for one initial state.
#[derive(Debug, Clone)]
pub struct StateCourse {
    pub error_probability: Vec<f64>,
    pub unnormalized_fidelity: Vec<f64>,
    pub susceptibility: Vec<f64>,
}

/// Per-channel susceptibility timecourse over the six cardinal states.
#[derive(Debug, Clone)]
pub struct SusceptibilityTimecourse {
    pub channel: ChannelKind,
    pub times: Vec<f64>,
    pub per_state: Vec<StateCourse>,
}

impl SusceptibilityTimecourse {
    /// CSV rows (t_ns, state_index, p, l_prime, s).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_ns,state,p,l_prime,s\n");
        for (idx, course) in self.per_state.iter().enumerate() {
            for (j, &t) in self.times.iter().enumerate() {
                out.push_str(&format!(
                    "{:.6},{},{:.12},{:.12},{:.12}\n",
                    t * 1e9,
                    idx,
                    course.error_probability[j],
                    course.unnormalized_fidelity[j],
                    course.susceptibility[j],
                ));
            }
        }
        out
    }
}

/// Time- and state-averaged susceptibility figures for one channel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelSusceptibility {
    pub kind: ChannelKind,
    /// Rate gamma_k in 1/s used for the r' weighting.
    pub rate: f64,
    /// s_k = p_k - l'_k.
    pub susceptibility: f64,
    pub error_probability: f64,
    pub unnormalized_fidelity: f64,
}

/// Full error-budget report for one gate.
#[derive(Debug, Clone, Serialize)]
pub struct SusceptibilityReport {
    pub gate_time_us: f64,
    pub channels: Vec<ChannelSusceptibility>,
    /// r' = T sum_k gamma_k s_k.
    pub decoherence_error: f64,
    /// r0 from closed-system evolution, when evaluated.
    pub intrinsic_error: Option<f64>,
    /// r_L from the Lindblad equation, when evaluated.
    pub lindblad_error: Option<f64>,
    /// r_L - (r0 + r'), when both errors are available.
    pub residual: Option<f64>,
}

/// Inputs of the achievable-error bound
/// r(T) >= exp(-a T[us]) + T (s1/T1 + sphi/Tphi + kappa s_cav n_bar).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ErrorBoundParams {
    /// Intrinsic-error decay constant a, per microsecond of gate time.
    pub decay_per_us: f64,
    /// Minimum relaxation susceptibility.
    pub s_relax_min: f64,
    /// Minimum dephasing susceptibility.
    pub s_dephase_min: f64,
    /// Minimum photon-loss susceptibility divided by the mean photon
    /// number.
    pub s_loss_min_per_photon: f64,
    pub mean_photon: f64,
    /// Transmon relaxation time in seconds.
    pub t1: f64,
    /// Transmon pure-dephasing time in seconds.
    pub t_phi: f64,
    /// Cavity loss rate in 1/s.
    pub kappa: f64,
}

impl ErrorBoundParams {
    /// Reference minima for 1 us gates on the lowest binomial code with the
    /// standard device rates.
    pub fn bin11_defaults() -> Self {
        ErrorBoundParams {
            decay_per_us: 11.05,
            s_relax_min: 0.25,
            s_dephase_min: 0.31,
            s_loss_min_per_photon: 0.94,
            mean_photon: 2.0,
            t1: 100e-6,
            t_phi: 25e-6,
            kappa: 1e3,
        }
    }

    /// Recomputes the minimum susceptibilities from a local gate ensemble.
    pub fn with_minima_from(
        mut self,
        s_relax: &[f64],
        s_dephase: &[f64],
        s_loss: &[f64],
    ) -> Self {
        let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
        if !s_relax.is_empty() {
            self.s_relax_min = min(s_relax);
        }
        if !s_dephase.is_empty() {
            self.s_dephase_min = min(s_dephase);
        }
        if !s_loss.is_empty() {
            self.s_loss_min_per_photon = min(s_loss) / self.mean_photon;
        }
        self
    }
}
