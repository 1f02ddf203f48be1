// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Gradient-based pulse synthesis.
//!
//! The cost is a weighted sum of the projected gate error, a quartic
//! soft-clip on the amplitudes, and a boundary-smoothness term. Gradients
//! flow exactly through every step exponential (see [`crate::propagator`])
//! and are pulled back to the Fourier coefficients by the chain rule; a
//! limited-memory quasi-Newton loop with a strong-Wolfe line search drives
//! the descent, restarted from seeded random coefficients.

mod cost;
mod lbfgs;
mod optimize;

pub use cost::{
    amplitude_penalty, boundary_penalty, gate_error_cost, total_propagator, CostEvaluator,
    CostTerms,
};
pub use lbfgs::{LbfgsOptions, LbfgsOutcome, Objective, StopReason};
pub use optimize::{optimize, optimize_seeded, random_restarts, OptimizedGate, RunRecord};

use crate::codes::{BosonicCode, LogicalGate};
use crate::error::{Error, Result};
use crate::hilbert::SpaceDescriptor;
use crate::pulse::{PulseParams, NUM_CONTROLS};

/// Waveform constraint set: bandwidth, step length, soft amplitude caps.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintPreset {
    pub name: &'static str,
    pub f_max_mhz: f64,
    pub dt: f64,
    /// Per-channel soft caps in MHz, ordered as `CONTROL_CHANNELS`.
    pub u_max_mhz: [f64; NUM_CONTROLS],
}

impl ConstraintPreset {
    /// Everyday constraints: 30 MHz bandwidth, 2 ns steps, 3 MHz cavity and
    /// 20 MHz transmon drives.
    pub fn standard() -> Self {
        ConstraintPreset {
            name: "standard",
            f_max_mhz: 30.0,
            dt: 2e-9,
            u_max_mhz: [20.0, 20.0, 3.0, 3.0],
        }
    }

    /// Looser constraints for fast gates: 45 MHz bandwidth, 1 ns steps,
    /// 15 MHz cavity drives.
    pub fn weak() -> Self {
        ConstraintPreset {
            name: "weak",
            f_max_mhz: 45.0,
            dt: 1e-9,
            u_max_mhz: [20.0, 20.0, 15.0, 15.0],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Self::standard()),
            "weak" => Ok(Self::weak()),
            other => Err(Error::invalid(format!(
                "unknown constraint preset '{other}' (expected 'standard' or 'weak')"
            ))),
        }
    }
}

/// Penalty weights c_i multiplying the cost terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeights {
    pub gate_error: f64,
    pub amplitude: f64,
    pub boundary: f64,
}

impl Default for PenaltyWeights {
    fn default() -> Self {
        // chosen so the penalties stay subordinate to the gate error near
        // convergence; all overridable through config
        PenaltyWeights {
            gate_error: 1.0,
            amplitude: 1e-4,
            boundary: 1e-3,
        }
    }
}

/// Optimizer stopping criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCriteria {
    pub max_iterations: usize,
    /// Infinity-norm tolerance on the scaled-parameter gradient.
    pub gradient_tol: f64,
    /// Terminate once the gate-error term drops below this value.
    pub target_gate_error: f64,
}

impl Default for StopCriteria {
    fn default() -> Self {
        StopCriteria {
            max_iterations: 2000,
            gradient_tol: 1e-9,
            target_gate_error: 1e-4,
        }
    }
}

/// A fully specified gate-synthesis problem.
#[derive(Clone)]
pub struct OptimizationProblem {
    pub space: SpaceDescriptor,
    pub code: BosonicCode,
    pub target: LogicalGate,
    /// Dispersive shift in rad/s.
    pub chi: f64,
    pub t_gate: f64,
    pub constraints: ConstraintPreset,
    /// Harmonic count per control; defaults to ceil(f_max * T).
    pub harmonics: usize,
    pub weights: PenaltyWeights,
    pub stop: StopCriteria,
}

impl OptimizationProblem {
    pub fn new(
        space: SpaceDescriptor,
        code: BosonicCode,
        target: LogicalGate,
        chi: f64,
        t_gate: f64,
        constraints: ConstraintPreset,
    ) -> Result<Self> {
        if t_gate <= 0.0 {
            return Err(Error::invalid("t_gate must be positive"));
        }
        if code.cavity_dim() != space.cavity_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.cavity_dim(),
                actual: code.cavity_dim(),
            });
        }
        let harmonics = PulseParams::min_harmonics(constraints.f_max_mhz, t_gate);
        let problem = OptimizationProblem {
            space,
            code,
            target,
            chi,
            t_gate,
            constraints,
            harmonics,
            weights: PenaltyWeights::default(),
            stop: StopCriteria::default(),
        };
        if problem.n_steps() < 2 {
            return Err(Error::invalid("gate time shorter than two control steps"));
        }
        Ok(problem)
    }

    /// Number of control steps; dt is stretched so that N dt = T exactly.
    pub fn n_steps(&self) -> usize {
        (self.t_gate / self.constraints.dt).round().max(1.0) as usize
    }

    pub fn dt(&self) -> f64 {
        self.t_gate / self.n_steps() as f64
    }

    /// All-zero coefficient template with this problem's shape.
    pub fn template_params(&self) -> Result<PulseParams> {
        PulseParams::zeros(
            self.harmonics,
            self.constraints.f_max_mhz,
            self.t_gate,
            self.n_steps(),
        )
    }

    /// Seeded random starting coefficients.
    pub fn random_params(&self, seed: u64) -> Result<PulseParams> {
        crate::pulse::random_params(
            self.harmonics,
            self.constraints.f_max_mhz,
            self.t_gate,
            self.n_steps(),
            &self.constraints.u_max_mhz,
            seed,
        )
    }

    /// Scale per flat parameter used to nondimensionalize the optimizer
    /// variables (the random-init range).
    pub fn parameter_scales(&self) -> Vec<f64> {
        let stride = 2 * self.harmonics + 1;
        let mut scales = Vec::with_capacity(NUM_CONTROLS * stride);
        for k in 0..NUM_CONTROLS {
            let s = self.constraints.u_max_mhz[k] / (4.0 * self.harmonics as f64);
            scales.extend(std::iter::repeat(s).take(stride));
        }
        scales
    }
}
