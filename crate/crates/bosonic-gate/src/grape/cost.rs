// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Cost terms and their exact gradients.
//!
//! The gate-error term is the projected Hilbert-Schmidt distance
//!
//! ```text
//! Psi_1 = 1 - |tr[P_in U_target^dag P_Q U_tot]|^2 / d_Q^2,   d_Q = 2,
//! ```
//!
//! evaluated through the two input-basis states rather than full matrices:
//! the projectors reduce the trace to two vector overlaps. The absolute
//! value makes the cost blind to the global phase of `U_tot`.

use num_complex::Complex64;

use crate::codes::{BosonicCode, LogicalGate};
use crate::hamiltonian::{build_static_hamiltonian, control_generators};
use crate::hilbert::SpaceDescriptor;
use crate::linalg::{CMatrix, ZERO};
use crate::operator::Operator;
use crate::propagator::TimePropagator;
use crate::pulse::{synthesize, FourierTables, PulseParams, Waveform, NUM_CONTROLS};

use super::{OptimizationProblem, PenaltyWeights};

const D_Q: f64 = 2.0;
/// Exponent cap for the quartic soft clip; the tail continues linearly in
/// the exponent so gradients stay finite.
const CLIP_EXPONENT_MAX: f64 = 700.0;

/// Cost terms of one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CostTerms {
    pub total: f64,
    /// Projected gate error Psi_1.
    pub gate_error: f64,
    /// Amplitude soft-clip penalty Psi_2.
    pub amplitude: f64,
    /// Boundary-smoothness penalty Psi_3.
    pub boundary: f64,
    /// The raw codespace trace overlap tr[...] / d_Q.
    pub overlap: Complex64,
}

/// Total unitary of a waveform: the ordered product of the per-step matrix
/// exponentials over the drift-plus-control Hamiltonian.
pub fn total_propagator(
    waveform: &Waveform,
    space: &SpaceDescriptor,
    chi: f64,
) -> Operator {
    let h0 = build_static_hamiltonian(space, chi);
    let gens = control_generators(space);
    let mut prop = TimePropagator::new(&h0, &gens, waveform.dt);
    Operator::new(prop.total_unitary(waveform))
}

/// Projected gate error of a dense total propagator against a logical
/// target. Input and output projectors are implied by the gate: codespace
/// for logical gates, error space for the recovery gate.
pub fn gate_error_cost(
    u_tot: &CMatrix,
    target: &LogicalGate,
    code: &BosonicCode,
    space: &SpaceDescriptor,
) -> f64 {
    let mut g = ZERO;
    for s in 0..2 {
        let input = code.embed_with_ground(space, &target.input_basis()[s]);
        let out = code.embed_with_ground(space, &target.output_basis()[s]);
        let propagated = u_tot * input.amplitudes();
        g += out.amplitudes().dotc(&propagated);
    }
    1.0 - (g.norm_sqr() / (D_Q * D_Q)).min(1.0)
}

fn soft_clip(u: f64, u_max: f64) -> (f64, f64) {
    const CAP: f64 = 1e300;
    let x = u / u_max;
    let q = x * x * x * x;
    let dq_du = 4.0 * x * x * x / u_max;
    if q <= CLIP_EXPONENT_MAX {
        let e = q.exp();
        (e, e * dq_du)
    } else {
        // linear-in-exponent tail, saturated to stay finite
        let e = CLIP_EXPONENT_MAX.exp();
        let value = (e * (1.0 + (q - CLIP_EXPONENT_MAX))).min(CAP);
        let slope = (e * dq_du.abs()).min(CAP) * dq_du.signum();
        (value, slope)
    }
}

/// Amplitude penalty: per-channel average of exp[(u/u_max)^4], summed over
/// the four channels. Equals 4 for an all-zero waveform.
pub fn amplitude_penalty(waveform: &Waveform, u_max_mhz: &[f64; NUM_CONTROLS]) -> f64 {
    let n = waveform.n_steps() as f64;
    let mut total = 0.0;
    for k in 0..NUM_CONTROLS {
        let mut acc = 0.0;
        for &u in &waveform.amplitudes[k] {
            acc += soft_clip(u, u_max_mhz[k]).0;
        }
        total += acc / n;
    }
    total
}

/// Boundary penalty: sum over channels of |u_0|^2 + |u_{N-1}|^2.
pub fn boundary_penalty(waveform: &Waveform) -> f64 {
    let n = waveform.n_steps();
    (0..NUM_CONTROLS)
        .map(|k| {
            let a = waveform.amplitudes[k][0];
            let b = waveform.amplitudes[k][n - 1];
            a * a + b * b
        })
        .sum()
}

/// Evaluates the full cost and its exact gradient for one problem. Owns the
/// propagator and per-evaluation storage; one instance per worker.
pub struct CostEvaluator {
    prop: TimePropagator,
    tables: FourierTables,
    template: PulseParams,
    in_states: [Vec<Complex64>; 2],
    out_states: [Vec<Complex64>; 2],
    u_max: [f64; NUM_CONTROLS],
    weights: PenaltyWeights,
    n_steps: usize,
    /// forward[s][j] = state s advanced through steps 0..j
    forward: [Vec<Vec<Complex64>>; 2],
}

impl CostEvaluator {
    pub fn new(problem: &OptimizationProblem) -> crate::error::Result<Self> {
        if problem.constraints.u_max_mhz.iter().any(|&u| !(u > 0.0)) {
            return Err(crate::error::Error::invalid(
                "amplitude caps must be positive",
            ));
        }
        let w = &problem.weights;
        if w.gate_error < 0.0 || w.amplitude < 0.0 || w.boundary < 0.0 {
            return Err(crate::error::Error::invalid(
                "penalty weights must be nonnegative",
            ));
        }
        let h0 = build_static_hamiltonian(&problem.space, problem.chi);
        let gens = control_generators(&problem.space);
        let prop = TimePropagator::new(&h0, &gens, problem.dt());
        let template = problem.template_params()?;
        let tables = FourierTables::new(&template);

        let embed = |v: &crate::linalg::CVector| -> Vec<Complex64> {
            problem
                .code
                .embed_with_ground(&problem.space, v)
                .as_slice()
                .to_vec()
        };
        let in_states = [
            embed(&problem.target.input_basis()[0]),
            embed(&problem.target.input_basis()[1]),
        ];
        let out_states = [
            embed(&problem.target.output_basis()[0]),
            embed(&problem.target.output_basis()[1]),
        ];
        let n_steps = problem.n_steps();
        Ok(CostEvaluator {
            prop,
            tables,
            template,
            in_states,
            out_states,
            u_max: problem.constraints.u_max_mhz,
            weights: problem.weights,
            n_steps,
            forward: [Vec::new(), Vec::new()],
        })
    }

    pub fn template(&self) -> &PulseParams {
        &self.template
    }

    fn overlap_sum(final_states: &[Vec<Complex64>; 2], outs: &[Vec<Complex64>; 2]) -> Complex64 {
        let mut g = ZERO;
        for s in 0..2 {
            for (o, p) in outs[s].iter().zip(&final_states[s]) {
                g += o.conj() * p;
            }
        }
        g
    }

    fn terms_from(&self, overlap: Complex64, waveform: &Waveform) -> CostTerms {
        let gate_error = 1.0 - (overlap.norm_sqr() / (D_Q * D_Q)).min(1.0);
        let amplitude = amplitude_penalty(waveform, &self.u_max);
        let boundary = boundary_penalty(waveform);
        CostTerms {
            total: self.weights.gate_error * gate_error
                + self.weights.amplitude * amplitude
                + self.weights.boundary * boundary,
            gate_error,
            amplitude,
            boundary,
            overlap: overlap / Complex64::new(D_Q, 0.0),
        }
    }

    /// Cost only: one forward propagation of the two basis states.
    pub fn cost(&mut self, params: &PulseParams) -> CostTerms {
        let waveform = synthesize(params);
        let mut finals = [self.in_states[0].clone(), self.in_states[1].clone()];
        for j in 0..self.n_steps {
            let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
            for state in finals.iter_mut() {
                self.prop.step(&u, state);
            }
        }
        self.terms_from(Self::overlap_sum(&finals, &self.out_states), &waveform)
    }

    /// Cost and exact gradient with respect to the flat Fourier coefficients
    /// (MHz units), via forward states, backward costates, and the
    /// per-step Frechet derivatives.
    pub fn cost_and_gradient(&mut self, params: &PulseParams) -> (CostTerms, Vec<f64>) {
        let waveform = synthesize(params);
        let n = self.n_steps;
        let dim = self.prop.dim();

        // forward pass, storing psi_s(j) for j = 0..N-1
        for s in 0..2 {
            self.forward[s].resize(n + 1, vec![ZERO; dim]);
            self.forward[s][0].copy_from_slice(&self.in_states[s]);
        }
        for j in 0..n {
            let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
            for s in 0..2 {
                let (head, tail) = self.forward[s].split_at_mut(j + 1);
                tail[0].copy_from_slice(&head[j]);
                self.prop.step(&u, &mut tail[0]);
            }
        }
        let finals = [self.forward[0][n].clone(), self.forward[1][n].clone()];
        let overlap = Self::overlap_sum(&finals, &self.out_states);
        let terms = self.terms_from(overlap, &waveform);

        // backward pass: costates chi_s(j) = (U_{j+1} ... U_{N-1})^dag out_s
        let mut chi = [self.out_states[0].clone(), self.out_states[1].clone()];
        let mut grad_amps: [Vec<f64>; NUM_CONTROLS] = std::array::from_fn(|_| vec![0.0; n]);
        let g_conj = overlap.conj();
        let c1 = self.weights.gate_error;
        let c2 = self.weights.amplitude;
        let c3 = self.weights.boundary;
        let inv_n = 1.0 / n as f64;
        let mut d4 = [ZERO; NUM_CONTROLS];

        for j in (0..n).rev() {
            let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
            let mut dg = [ZERO; NUM_CONTROLS];
            for s in 0..2 {
                self.prop
                    .step_derivatives(&u, &self.forward[s][j], &chi[s], &mut d4);
                for k in 0..NUM_CONTROLS {
                    dg[k] += d4[k];
                }
            }
            for k in 0..NUM_CONTROLS {
                // d Psi_1 / d u = -(2/d_Q^2) Re(conj(G) dG/du)
                let dpsi1 = -2.0 / (D_Q * D_Q) * (g_conj * dg[k]).re;
                let dpsi2 = soft_clip(u[k], self.u_max[k]).1 * inv_n;
                let dpsi3 = if j == 0 || j == n - 1 { 2.0 * u[k] } else { 0.0 };
                grad_amps[k][j] = c1 * dpsi1 + c2 * dpsi2 + c3 * dpsi3;
            }
            if j > 0 {
                for s in 0..2 {
                    self.prop.step_adjoint(&u, &mut chi[s]);
                }
            }
        }

        (terms, self.tables.pullback(&grad_amps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, logical_unitary, CodeKind, GateKind};
    use crate::grape::ConstraintPreset;
    use crate::hilbert::make_space;
    use crate::linalg::max_abs;
    use approx::assert_relative_eq;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn small_problem(kind: GateKind) -> OptimizationProblem {
        // 2 x 15 space keeps the Bin(1,1) headroom requirement
        let space = make_space(2, 15).unwrap();
        let code = build_code(CodeKind::Bin11, 15).unwrap();
        let target = logical_unitary(&code, &space, kind);
        let constraints = ConstraintPreset {
            name: "test",
            f_max_mhz: 16.0,
            dt: 2e-9,
            u_max_mhz: [20.0, 20.0, 3.0, 3.0],
        };
        OptimizationProblem::new(space, code, target, -TWO_PI * 2.0e6, 64e-9, constraints)
            .unwrap()
    }

    #[test]
    fn zero_waveform_preserves_codespace_states() {
        // H_0 annihilates the |g> sector, so the identity target is exact
        let problem = small_problem(GateKind::Identity);
        let mut ev = CostEvaluator::new(&problem).unwrap();
        let params = problem.template_params().unwrap();
        let terms = ev.cost(&params);
        assert!(terms.gate_error < 1e-12, "Psi1 = {:.3e}", terms.gate_error);
        // penalties at zero waveform: amplitude 4 (exp(0) per channel), boundary 0
        assert_relative_eq!(terms.amplitude, 4.0, epsilon = 1e-12);
        assert_relative_eq!(terms.boundary, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_waveform_phases_excited_sector() {
        // |e, 1> picks up exp(-i chi T)
        let space = make_space(2, 8).unwrap();
        let chi = -TWO_PI * 2.0e6;
        let t = 100e-9;
        let mut w = Waveform::zeros(50, t);
        w.dt = t / 50.0;
        let u = total_propagator(&w, &space, chi);
        let idx = space.index(1, 1);
        let expected = Complex64::from_polar(1.0, -chi * t);
        assert!((u.matrix()[(idx, idx)] - expected).norm() < 1e-9);
    }

    #[test]
    fn gate_error_cost_trivial_cases() {
        let space = make_space(2, 15).unwrap();
        let code = build_code(CodeKind::Bin11, 15).unwrap();
        let z = logical_unitary(&code, &space, GateKind::Z);
        let x = logical_unitary(&code, &space, GateKind::X);

        // exact target (embedded in a full unitary: pad with identity off
        // the codespace via U = target + (1 - P_support))
        let dim = space.total_dim();
        let pad = {
            let u = z.target_unitary().matrix();
            let support = u.adjoint() * u;
            u + CMatrix::identity(dim, dim) - support
        };
        assert!(gate_error_cost(&pad, &z, &code, &space) < 1e-12);

        // global phase is ignored
        let phased = &pad * Complex64::from_polar(1.0, 1.234);
        assert!(gate_error_cost(&phased, &z, &code, &space) < 1e-12);

        // X against a Z target scores a full error: tr(X Z) = 0 on the
        // codespace
        let x_mat = x.target_unitary().matrix().clone();
        assert_relative_eq!(
            gate_error_cost(&x_mat, &z, &code, &space),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn amplitude_penalty_values() {
        let u_max = [20.0, 20.0, 3.0, 3.0];
        let mut w = Waveform::zeros(10, 1e-7);
        assert_relative_eq!(amplitude_penalty(&w, &u_max), 4.0, epsilon = 1e-12);

        // one channel pinned at u_max: its average becomes e^1
        for v in w.amplitudes[2].iter_mut() {
            *v = 3.0;
        }
        assert_relative_eq!(
            amplitude_penalty(&w, &u_max),
            3.0 + std::f64::consts::E,
            epsilon = 1e-12
        );

        // doubling it gives e^16
        for v in w.amplitudes[2].iter_mut() {
            *v = 6.0;
        }
        assert_relative_eq!(
            amplitude_penalty(&w, &u_max),
            3.0 + 16.0f64.exp(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn amplitude_penalty_survives_extreme_inputs() {
        let u_max = [20.0, 20.0, 3.0, 3.0];
        let mut w = Waveform::zeros(4, 1e-8);
        for v in w.amplitudes[3].iter_mut() {
            *v = 3000.0; // 1000 * u_max
        }
        let p = amplitude_penalty(&w, &u_max);
        assert!(p.is_finite() && p > 0.0);
    }

    #[test]
    fn boundary_penalty_values() {
        let mut w = Waveform::zeros(8, 1e-7);
        assert_eq!(boundary_penalty(&w), 0.0);
        w.amplitudes[1][0] = 1.0;
        assert_relative_eq!(boundary_penalty(&w), 1.0, epsilon = 1e-15);
        w.amplitudes[1][7] = 2.0;
        w.amplitudes[1][0] = 2.0;
        assert_relative_eq!(boundary_penalty(&w), 8.0, epsilon = 1e-15);
    }

    #[test]
    fn penalty_gradients_vanish_at_zero_waveform() {
        // Psi2 is quartic and Psi3 quadratic at the origin, so with the
        // gate-error weight zeroed the whole gradient vanishes there.
        let mut problem = small_problem(GateKind::Hadamard);
        problem.weights.gate_error = 0.0;
        let mut ev = CostEvaluator::new(&problem).unwrap();
        let params = problem.template_params().unwrap();
        let (_, grad) = ev.cost_and_gradient(&params);
        assert!(grad.iter().all(|g| g.abs() < 1e-15));
    }

    #[test]
    fn gate_error_gradient_nonzero_off_origin() {
        let problem = small_problem(GateKind::Hadamard);
        let mut ev = CostEvaluator::new(&problem).unwrap();
        let params = problem.random_params(9).unwrap();
        let (_, grad) = ev.cost_and_gradient(&params);
        assert!(grad.iter().any(|g| g.abs() > 0.0));
    }

    #[test]
    fn gradient_matches_finite_differences_small_problem() {
        // dim-8-style instance: 2 x 4 space with a toy two-Fock code
        let space = make_space(2, 4).unwrap();
        // Bin codes do not fit in 4 levels; drive the Hadamard of a bare
        // Fock {|0>, |2>} pair instead by reusing Bin11 structure on a
        // larger space for target construction is not possible here, so
        // exercise the gradient through the full-space machinery with the
        // smallest legal code space (cavity 15) but only 4 steps.
        let _ = space;
        let mut problem = small_problem(GateKind::Hadamard);
        problem.t_gate = 8e-9; // 4 steps at 2 ns
        problem.harmonics = 2;
        let problem = OptimizationProblem {
            harmonics: 2,
            ..problem
        };
        let mut ev = CostEvaluator::new(&problem).unwrap();
        let mut params = PulseParams::zeros(2, 16.0, 8e-9, 4).unwrap();
        // non-trivial point
        let flat: Vec<f64> = (0..params.parameter_count())
            .map(|i| 2.0 * ((i as f64 * 0.73).sin()))
            .collect();
        params = params.from_flat(&flat);

        let (_, grad) = ev.cost_and_gradient(&params);
        let eps = 1e-6;
        let mut worst: f64 = 0.0;
        for i in 0..flat.len() {
            let mut up = flat.clone();
            up[i] += eps;
            let mut dn = flat.clone();
            dn[i] -= eps;
            let fu = ev.cost(&params.from_flat(&up)).total;
            let fd = ev.cost(&params.from_flat(&dn)).total;
            let numeric = (fu - fd) / (2.0 * eps);
            let denom = numeric.abs().max(grad[i].abs()).max(1e-10);
            worst = worst.max((numeric - grad[i]).abs() / denom);
        }
        assert!(worst < 1e-6, "max relative gradient deviation {worst:.3e}");
    }

    #[test]
    fn total_propagator_is_unitary() {
        let space = make_space(2, 12).unwrap();
        let mut w = Waveform::zeros(40, 80e-9);
        for j in 0..40 {
            w.amplitudes[0][j] = 8.0 * (j as f64 * 0.2).sin();
            w.amplitudes[2][j] = 2.5 * (j as f64 * 0.15).cos();
        }
        let u = total_propagator(&w, &space, -TWO_PI * 2.0e6);
        let dim = space.total_dim();
        let defect = max_abs(&(u.matrix().adjoint() * u.matrix() - CMatrix::identity(dim, dim)));
        assert!(defect < 1e-9, "unitarity defect {defect:.3e}");
    }
}
