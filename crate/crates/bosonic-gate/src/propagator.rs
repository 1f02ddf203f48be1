// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant time propagation.
//!
//! Within step j the Hamiltonian is frozen at
//! `H_j = H_drift + sum_k 2 pi u_kj H_k` (u in MHz, H in rad/s) and states
//! advance by `exp(-i H_j dt)`. The exponential is applied to state vectors
//! by a truncated Taylor series over the sparse Hamiltonian, with substep
//! splitting when the step norm grows; the series runs to machine precision,
//! so the step equals the exact matrix exponential.
//!
//! Gradients use the block-triangular (augmented-matrix) identity
//!
//! ```text
//! exp([[A, E], [0, A]]) = [[exp(A), DexpA(E)], [0, exp(A)]]
//! ```
//!
//! applied to vectors, which yields the exact Frechet derivative of each
//! step exponential in the four control directions without forming any
//! dense matrix.

use num_complex::Complex64;

use crate::hamiltonian::MHZ_TO_ANGULAR;
use crate::linalg::{CMatrix, ZERO};
use crate::operator::{Operator, SparseOp};
use crate::pulse::{Waveform, NUM_CONTROLS};

/// Sub-exponential splitting threshold on |theta| * ||H||_1.
const THETA_STEP: f64 = 1.0;
/// Taylor truncation order per substep.
const MAX_TERMS: usize = 60;
/// Relative floor at which the series is considered converged.
const SERIES_TOL: f64 = 1e-16;

/// Drift plus control generators merged onto one sparsity pattern, so a
/// step Hamiltonian materializes as a single value array.
pub struct AssembledHamiltonian {
    dim: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    drift_vals: Vec<Complex64>,
    ctrl_vals: [Vec<Complex64>; NUM_CONTROLS],
}

impl AssembledHamiltonian {
    pub fn new(drift: &Operator, generators: &[Operator; NUM_CONTROLS]) -> Self {
        let dim = drift.dim();
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<(u32, u32), [Complex64; 1 + NUM_CONTROLS]> = BTreeMap::new();
        let mut absorb = |m: &CMatrix, slot: usize| {
            for i in 0..dim {
                for j in 0..dim {
                    let v = m[(i, j)];
                    if v != ZERO {
                        merged.entry((i as u32, j as u32)).or_insert([ZERO; 5])[slot] = v;
                    }
                }
            }
        };
        absorb(drift.matrix(), 0);
        for (k, g) in generators.iter().enumerate() {
            assert_eq!(g.dim(), dim);
            absorb(g.matrix(), k + 1);
        }

        let nnz = merged.len();
        let mut rows = Vec::with_capacity(nnz);
        let mut cols = Vec::with_capacity(nnz);
        let mut drift_vals = Vec::with_capacity(nnz);
        let mut ctrl_vals: [Vec<Complex64>; NUM_CONTROLS] =
            std::array::from_fn(|_| Vec::with_capacity(nnz));
        for ((r, c), vals) in merged {
            rows.push(r);
            cols.push(c);
            drift_vals.push(vals[0]);
            for k in 0..NUM_CONTROLS {
                ctrl_vals[k].push(vals[k + 1]);
            }
        }
        AssembledHamiltonian {
            dim,
            rows,
            cols,
            drift_vals,
            ctrl_vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    pub fn pattern(&self) -> (&[u32], &[u32]) {
        (&self.rows, &self.cols)
    }

    /// Writes the step values H = drift + sum_k 2 pi 1e6 u_k[MHz] gen_k
    /// (rad/s) into `vals`.
    pub fn step_values(&self, u: &[f64; NUM_CONTROLS], vals: &mut Vec<Complex64>) {
        vals.clear();
        vals.extend_from_slice(&self.drift_vals);
        for k in 0..NUM_CONTROLS {
            let w = Complex64::new(MHZ_TO_ANGULAR * u[k], 0.0);
            if w == ZERO {
                continue;
            }
            let src = &self.ctrl_vals[k];
            for (dst, s) in vals.iter_mut().zip(src) {
                *dst += w * s;
            }
        }
    }

    /// Max absolute column sum of the step Hamiltonian values.
    pub fn one_norm(&self, vals: &[Complex64], col_scratch: &mut Vec<f64>) -> f64 {
        col_scratch.clear();
        col_scratch.resize(self.dim, 0.0);
        for (k, v) in vals.iter().enumerate() {
            col_scratch[self.cols[k] as usize] += v.norm();
        }
        col_scratch.iter().cloned().fold(0.0, f64::max)
    }

    /// y += scale * H x with the given step values.
    #[inline]
    pub fn apply_add(
        &self,
        vals: &[Complex64],
        scale: Complex64,
        x: &[Complex64],
        y: &mut [Complex64],
    ) {
        for k in 0..vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            y[r] += scale * vals[k] * x[c];
        }
    }

    /// out += scale * H m (dense right operand).
    pub fn left_mul_add(
        &self,
        vals: &[Complex64],
        scale: Complex64,
        m: &CMatrix,
        out: &mut CMatrix,
    ) {
        let n = self.dim;
        for k in 0..vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            let w = scale * vals[k];
            for j in 0..n {
                out[(r, j)] += w * m[(c, j)];
            }
        }
    }

    /// out += scale * m * H (dense left operand).
    pub fn right_mul_add(
        &self,
        vals: &[Complex64],
        scale: Complex64,
        m: &CMatrix,
        out: &mut CMatrix,
    ) {
        let n = self.dim;
        for k in 0..vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            let w = scale * vals[k];
            for i in 0..n {
                out[(i, c)] += m[(i, r)] * w;
            }
        }
    }
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Piecewise-constant propagator bound to one assembled Hamiltonian and a
/// fixed step length. Owns its scratch buffers.
pub struct TimePropagator {
    ham: AssembledHamiltonian,
    directions: [SparseOp; NUM_CONTROLS],
    dt: f64,
    vals: Vec<Complex64>,
    col_scratch: Vec<f64>,
    term: Vec<Complex64>,
    term_next: Vec<Complex64>,
    acc: Vec<Complex64>,
    dterm: [Vec<Complex64>; NUM_CONTROLS],
    dterm_next: [Vec<Complex64>; NUM_CONTROLS],
    dacc: [Vec<Complex64>; NUM_CONTROLS],
}

impl TimePropagator {
    pub fn new(drift: &Operator, generators: &[Operator; NUM_CONTROLS], dt: f64) -> Self {
        assert!(dt > 0.0);
        let ham = AssembledHamiltonian::new(drift, generators);
        let dim = ham.dim();
        let directions =
            std::array::from_fn(|k| SparseOp::from_dense(generators[k].matrix(), 0.0));
        TimePropagator {
            ham,
            directions,
            dt,
            vals: Vec::new(),
            col_scratch: Vec::new(),
            term: vec![ZERO; dim],
            term_next: vec![ZERO; dim],
            acc: vec![ZERO; dim],
            dterm: std::array::from_fn(|_| vec![ZERO; dim]),
            dterm_next: std::array::from_fn(|_| vec![ZERO; dim]),
            dacc: std::array::from_fn(|_| vec![ZERO; dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.ham.dim()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn hamiltonian(&self) -> &AssembledHamiltonian {
        &self.ham
    }

    fn theta(&self) -> Complex64 {
        Complex64::new(0.0, -self.dt)
    }

    fn substeps(&mut self, u: &[f64; NUM_CONTROLS]) -> usize {
        self.ham.step_values(u, &mut self.vals);
        let norm = self.ham.one_norm(&self.vals, &mut self.col_scratch) * self.dt;
        ((norm / THETA_STEP).ceil() as usize).max(1)
    }

    /// psi <- exp(-i H(u) dt) psi
    pub fn step(&mut self, u: &[f64; NUM_CONTROLS], psi: &mut [Complex64]) {
        let s = self.substeps(u);
        self.taylor_apply(self.theta() / s as f64, s, psi);
    }

    /// psi <- exp(+i H(u) dt) psi, the adjoint of `step`.
    pub fn step_adjoint(&mut self, u: &[f64; NUM_CONTROLS], psi: &mut [Complex64]) {
        let s = self.substeps(u);
        self.taylor_apply(-self.theta() / s as f64, s, psi);
    }

    fn taylor_apply(&mut self, theta: Complex64, substeps: usize, psi: &mut [Complex64]) {
        for _ in 0..substeps {
            self.term.copy_from_slice(psi);
            self.acc.copy_from_slice(psi);
            let mut small_streak = 0;
            for m in 1..=MAX_TERMS {
                let scale = theta / m as f64;
                self.term_next.fill(ZERO);
                self.ham
                    .apply_add(&self.vals, scale, &self.term, &mut self.term_next);
                std::mem::swap(&mut self.term, &mut self.term_next);
                for (a, t) in self.acc.iter_mut().zip(&self.term) {
                    *a += t;
                }
                if inf_norm(&self.term) <= SERIES_TOL * inf_norm(&self.acc).max(1e-300) {
                    small_streak += 1;
                    if small_streak >= 2 {
                        break;
                    }
                } else {
                    small_streak = 0;
                }
            }
            psi.copy_from_slice(&self.acc);
        }
    }

    /// Exact directional derivatives of one step: fills
    /// `d_out[k] = <chi| d/du_k exp(-i H(u) dt) |psi>` for the four control
    /// channels.
    pub fn step_derivatives(
        &mut self,
        u: &[f64; NUM_CONTROLS],
        psi: &[Complex64],
        chi: &[Complex64],
        d_out: &mut [Complex64; NUM_CONTROLS],
    ) {
        let s = self.substeps(u);
        let theta = self.theta() / s as f64;
        // dA/du_k = theta * 2 pi 1e6 * G_k, split across substeps like A
        let dir_scale = theta * Complex64::new(MHZ_TO_ANGULAR, 0.0);

        // running pair (x_k, y): x accumulates the Frechet action
        for x in self.dacc.iter_mut() {
            x.fill(ZERO);
        }
        self.acc.copy_from_slice(psi);

        for _ in 0..s {
            // Taylor terms for the pair [[A, E_k], [0, A]] acting on
            // (x_k, y); term recursions share the y-chain.
            self.term.copy_from_slice(&self.acc);
            for k in 0..NUM_CONTROLS {
                self.dterm[k].copy_from_slice(&self.dacc[k]);
            }
            let mut small_streak = 0;
            for m in 1..=MAX_TERMS {
                let inv_m = 1.0 / m as f64;
                let scale = theta * inv_m;
                let escale = dir_scale * inv_m;
                for k in 0..NUM_CONTROLS {
                    self.dterm_next[k].fill(ZERO);
                    self.ham.apply_add(
                        &self.vals,
                        scale,
                        &self.dterm[k],
                        &mut self.dterm_next[k],
                    );
                    self.directions[k].apply_add_scaled(escale, &self.term, &mut self.dterm_next[k]);
                }
                self.term_next.fill(ZERO);
                self.ham
                    .apply_add(&self.vals, scale, &self.term, &mut self.term_next);
                std::mem::swap(&mut self.term, &mut self.term_next);
                for k in 0..NUM_CONTROLS {
                    std::mem::swap(&mut self.dterm[k], &mut self.dterm_next[k]);
                }

                self.acc
                    .iter_mut()
                    .zip(&self.term)
                    .for_each(|(a, t)| *a += t);
                let mut worst: f64 = inf_norm(&self.term);
                for k in 0..NUM_CONTROLS {
                    self.dacc[k]
                        .iter_mut()
                        .zip(&self.dterm[k])
                        .for_each(|(a, t)| *a += t);
                    worst = worst.max(inf_norm(&self.dterm[k]));
                }
                let floor = inf_norm(&self.acc).max(1.0);
                if worst <= SERIES_TOL * floor {
                    small_streak += 1;
                    if small_streak >= 2 {
                        break;
                    }
                } else {
                    small_streak = 0;
                }
            }
        }
        for k in 0..NUM_CONTROLS {
            let mut dot = ZERO;
            for (c, x) in chi.iter().zip(&self.dacc[k]) {
                dot += c.conj() * x;
            }
            d_out[k] = dot;
        }
    }

    /// Dense total propagator U = U_{N-1} ... U_1 U_0 of a waveform.
    pub fn total_unitary(&mut self, waveform: &Waveform) -> CMatrix {
        let dim = self.dim();
        let mut u_tot = CMatrix::identity(dim, dim);
        let mut term = CMatrix::zeros(dim, dim);
        let mut term_next = CMatrix::zeros(dim, dim);
        let mut acc = CMatrix::zeros(dim, dim);
        for j in 0..waveform.n_steps() {
            let u: [f64; NUM_CONTROLS] = std::array::from_fn(|k| waveform.amplitudes[k][j]);
            let s = self.substeps(&u);
            let theta = self.theta() / s as f64;
            for _ in 0..s {
                term.copy_from(&u_tot);
                acc.copy_from(&u_tot);
                let mut small_streak = 0;
                for m in 1..=MAX_TERMS {
                    let scale = theta / m as f64;
                    term_next.fill(ZERO);
                    self.ham
                        .left_mul_add(&self.vals, scale, &term, &mut term_next);
                    std::mem::swap(&mut term, &mut term_next);
                    acc += &term;
                    let tnorm = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    let anorm = acc.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
                    if tnorm <= SERIES_TOL * anorm.max(1e-300) {
                        small_streak += 1;
                        if small_streak >= 2 {
                            break;
                        }
                    } else {
                        small_streak = 0;
                    }
                }
                u_tot.copy_from(&acc);
            }
        }
        u_tot
    }
}
