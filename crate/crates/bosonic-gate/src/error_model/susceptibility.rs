// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Susceptibility timecourses and gate-level averages.

use crate::codes::{BosonicCode, LogicalGate};
use crate::dynamics::{propagate_closed, DecoherenceChannel, TrajectoryStates};
use crate::error::Result;
use crate::hilbert::SpaceDescriptor;
use crate::pulse::Waveform;
use crate::states::StateVector;

use super::{ChannelSusceptibility, StateCourse, SusceptibilityReport, SusceptibilityTimecourse};

/// Decoherence-free trajectories of the six cardinal inputs, sampled at
/// every control step; the base object for all susceptibility queries on
/// one gate.
pub struct SusceptibilityAnalysis {
    times: Vec<f64>,
    trajectories: Vec<Vec<StateVector>>,
    gate_time: f64,
}

impl SusceptibilityAnalysis {
    pub fn new(
        waveform: &Waveform,
        target: &LogicalGate,
        code: &BosonicCode,
        space: &SpaceDescriptor,
        chi: f64,
    ) -> Result<Self> {
        let inputs = target.cardinal_inputs(code, space);
        let mut trajectories = Vec::with_capacity(inputs.len());
        let mut times = Vec::new();
        for input in &inputs {
            let traj = propagate_closed(waveform, space, chi, input, 1)?;
            if times.is_empty() {
                times = traj.times.clone();
            }
            match traj.states {
                TrajectoryStates::Pure(states) => trajectories.push(states),
                TrajectoryStates::Mixed(_) => unreachable!("closed propagation is pure"),
            }
        }
        Ok(SusceptibilityAnalysis {
            times,
            trajectories,
            gate_time: waveform.t_gate,
        })
    }

    pub fn gate_time(&self) -> f64 {
        self.gate_time
    }

    /// p, l', s at every step for every cardinal state.
    pub fn timecourse(&self, channel: &DecoherenceChannel) -> SusceptibilityTimecourse {
        let jump = channel.jump();
        let jdj = channel.jump_dag_jump();
        let per_state = self
            .trajectories
            .iter()
            .map(|states| {
                let mut p = Vec::with_capacity(states.len());
                let mut lp = Vec::with_capacity(states.len());
                let mut s = Vec::with_capacity(states.len());
                for state in states {
                    let amps = state.as_slice();
                    let prob = jdj.quadratic_form(amps).re;
                    let fid = jump.quadratic_form(amps).norm_sqr();
                    p.push(prob);
                    lp.push(fid);
                    s.push(prob - fid);
                }
                StateCourse {
                    error_probability: p,
                    unnormalized_fidelity: lp,
                    susceptibility: s,
                }
            })
            .collect();
        SusceptibilityTimecourse {
            channel: channel.kind,
            times: self.times.clone(),
            per_state,
        }
    }

    /// Trapezoidal time average over the gate window and arithmetic mean
    /// over the six cardinal states; returns (s_k, p_k, l'_k).
    pub fn gate_susceptibility(&self, channel: &DecoherenceChannel) -> (f64, f64, f64) {
        let tc = self.timecourse(channel);
        let mut s_acc = 0.0;
        let mut p_acc = 0.0;
        let mut l_acc = 0.0;
        for course in &tc.per_state {
            s_acc += trapezoid_mean(&tc.times, &course.susceptibility);
            p_acc += trapezoid_mean(&tc.times, &course.error_probability);
            l_acc += trapezoid_mean(&tc.times, &course.unnormalized_fidelity);
        }
        let n = tc.per_state.len() as f64;
        (s_acc / n, p_acc / n, l_acc / n)
    }

    /// Decoherence-induced gate error r' = T sum_k gamma_k s_k.
    pub fn decoherence_error(&self, channels: &[DecoherenceChannel]) -> f64 {
        channels
            .iter()
            .map(|ch| {
                if ch.rate == 0.0 {
                    0.0
                } else {
                    ch.rate * self.gate_susceptibility(ch).0
                }
            })
            .sum::<f64>()
            * self.gate_time
    }

    /// Assembles the full report; pass the closed- and open-system errors
    /// when available to get the residual.
    pub fn report(
        &self,
        channels: &[DecoherenceChannel],
        intrinsic_error: Option<f64>,
        lindblad_error: Option<f64>,
    ) -> SusceptibilityReport {
        let per_channel: Vec<ChannelSusceptibility> = channels
            .iter()
            .map(|ch| {
                let (s, p, lp) = self.gate_susceptibility(ch);
                ChannelSusceptibility {
                    kind: ch.kind,
                    rate: ch.rate,
                    susceptibility: s,
                    error_probability: p,
                    unnormalized_fidelity: lp,
                }
            })
            .collect();
        let r_prime = self.gate_time
            * per_channel
                .iter()
                .map(|c| c.rate * c.susceptibility)
                .sum::<f64>();
        let residual = match (intrinsic_error, lindblad_error) {
            (Some(r0), Some(rl)) => Some(model_residual(rl, r0, r_prime)),
            _ => None,
        };
        SusceptibilityReport {
            gate_time_us: self.gate_time * 1e6,
            channels: per_channel,
            decoherence_error: r_prime,
            intrinsic_error,
            lindblad_error,
            residual,
        }
    }
}

/// r_L - (r0 + r'); small when the first-order budget captures the
/// Lindblad result.
pub fn model_residual(lindblad_error: f64, intrinsic_error: f64, decoherence_error: f64) -> f64 {
    lindblad_error - (intrinsic_error + decoherence_error)
}

fn trapezoid_mean(times: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    if times.len() < 2 {
        return values.first().copied().unwrap_or(0.0);
    }
    let mut acc = 0.0;
    for j in 0..times.len() - 1 {
        acc += 0.5 * (values[j] + values[j + 1]) * (times[j + 1] - times[j]);
    }
    acc / (times[times.len() - 1] - times[0])
}
