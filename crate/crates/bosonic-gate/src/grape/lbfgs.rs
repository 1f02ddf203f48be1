// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Limited-memory quasi-Newton descent with a strong-Wolfe line search.
//!
//! Two-loop recursion over the last `memory` curvature pairs, initial
//! Hessian scaled by s.y / y.y, cautious updates, and cubic-interpolation
//! zoom (Nocedal & Wright, ch. 3 and 7). The caller's variables should be
//! roughly O(1); the gate-synthesis driver nondimensionalizes coefficients
//! before calling in here.

use std::collections::VecDeque;

/// Objective with gradient; `accept` is invoked on every accepted iterate
/// and may stop the descent early (used for target-cost termination).
pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> (f64, Vec<f64>);

    fn accept(&mut self, _x: &[f64], _f: f64) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iterations: usize,
    /// Infinity-norm gradient tolerance.
    pub gradient_tol: f64,
    pub max_line_search_steps: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        LbfgsOptions {
            memory: 10,
            max_iterations: 2000,
            gradient_tol: 1e-9,
            max_line_search_steps: 30,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `Objective::accept` asked to stop.
    TargetReached,
    GradientConverged,
    MaxIterations,
    LineSearchFailed,
    /// Cost stopped moving at machine precision.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub reason: StopReason,
    /// Cost at every accepted iterate, starting with the initial point.
    pub trace: Vec<f64>,
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Minimizes the objective starting from `x0`.
pub fn minimize<O: Objective>(obj: &mut O, x0: &[f64], opts: &LbfgsOptions) -> LbfgsOutcome {
    let mut x = x0.to_vec();
    let mut evaluations = 0usize;
    let eval = |obj: &mut O, pt: &[f64], count: &mut usize| {
        *count += 1;
        obj.evaluate(pt)
    };

    let (mut f, mut g) = eval(obj, &x, &mut evaluations);
    let mut trace = vec![f];
    let mut best_x = x.clone();
    let mut best_f = f;

    let mut pairs: VecDeque<Pair> = VecDeque::with_capacity(opts.memory);
    let mut reason = StopReason::MaxIterations;
    let mut iterations = 0usize;
    let mut ls_failures = 0usize;
    let mut stall_streak = 0usize;

    if obj.accept(&x, f) {
        reason = StopReason::TargetReached;
    } else if inf_norm(&g) <= opts.gradient_tol {
        reason = StopReason::GradientConverged;
    } else {
        for iter in 0..opts.max_iterations {
            iterations = iter + 1;

            // two-loop recursion
            let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
            let mut alphas = Vec::with_capacity(pairs.len());
            for p in pairs.iter().rev() {
                let a = p.rho * dot(&p.s, &d);
                for (di, yi) in d.iter_mut().zip(&p.y) {
                    *di -= a * yi;
                }
                alphas.push(a);
            }
            if let Some(last) = pairs.back() {
                let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y).max(1e-300);
                for di in d.iter_mut() {
                    *di *= gamma;
                }
            }
            for (p, &a) in pairs.iter().zip(alphas.iter().rev()) {
                let b = p.rho * dot(&p.y, &d);
                for (di, si) in d.iter_mut().zip(&p.s) {
                    *di += (a - b) * si;
                }
            }

            let mut dphi0 = dot(&g, &d);
            if dphi0 >= 0.0 {
                // not a descent direction: drop the history and fall back
                pairs.clear();
                d = g.iter().map(|v| -v).collect();
                dphi0 = dot(&g, &d);
            }

            let alpha_init = if pairs.is_empty() && iter == 0 {
                (1.0 / inf_norm(&g).max(1e-12)).min(1.0)
            } else {
                1.0
            };

            match line_search(
                obj,
                &x,
                f,
                &g,
                &d,
                dphi0,
                alpha_init,
                opts,
                &mut evaluations,
            ) {
                Some((alpha, f_new, g_new)) => {
                    ls_failures = 0;
                    let s: Vec<f64> = d.iter().map(|v| v * alpha).collect();
                    let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
                    let sy = dot(&s, &y);
                    let s_norm = dot(&s, &s).sqrt();
                    let y_norm = dot(&y, &y).sqrt();
                    if sy > 1e-10 * s_norm * y_norm {
                        if pairs.len() == opts.memory {
                            pairs.pop_front();
                        }
                        let rho = 1.0 / sy;
                        pairs.push_back(Pair { s: s.clone(), y, rho });
                    }
                    for (xi, si) in x.iter_mut().zip(&s) {
                        *xi += si;
                    }
                    let f_prev = f;
                    f = f_new;
                    g = g_new;
                    trace.push(f);
                    if f < best_f {
                        best_f = f;
                        best_x = x.clone();
                    }
                    if obj.accept(&x, f) {
                        reason = StopReason::TargetReached;
                        break;
                    }
                    if inf_norm(&g) <= opts.gradient_tol {
                        reason = StopReason::GradientConverged;
                        break;
                    }
                    if (f_prev - f).abs() <= 1e-16 * (1.0 + f.abs()) {
                        stall_streak += 1;
                        if stall_streak >= 3 {
                            reason = StopReason::Stalled;
                            break;
                        }
                    } else {
                        stall_streak = 0;
                    }
                }
                None => {
                    ls_failures += 1;
                    if ls_failures >= 2 || pairs.is_empty() {
                        reason = StopReason::LineSearchFailed;
                        break;
                    }
                    // retry steepest descent from scratch once
                    pairs.clear();
                }
            }
        }
    }

    let gradient_norm = inf_norm(&g);
    // report the best iterate seen, which is the current one except after
    // failures
    LbfgsOutcome {
        x: best_x,
        f: best_f,
        gradient_norm,
        iterations,
        evaluations,
        reason,
        trace,
    }
}

/// Strong-Wolfe line search; returns (alpha, f, g) at the accepted point.
#[allow(clippy::too_many_arguments)]
fn line_search<O: Objective>(
    obj: &mut O,
    x: &[f64],
    phi0: f64,
    _g0: &[f64],
    d: &[f64],
    dphi0: f64,
    alpha_init: f64,
    opts: &LbfgsOptions,
    evaluations: &mut usize,
) -> Option<(f64, f64, Vec<f64>)> {
    debug_assert!(dphi0 < 0.0);
    let c1 = opts.wolfe_c1;
    let c2 = opts.wolfe_c2;
    let alpha_max = 1e6;

    let probe = |obj: &mut O, alpha: f64, evals: &mut usize| {
        let pt: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
        *evals += 1;
        let (f, g) = obj.evaluate(&pt);
        let slope = dot(&g, d);
        (f, g, slope)
    };

    let zoom = |obj: &mut O,
                mut lo: (f64, f64, f64),
                mut hi: (f64, f64, f64),
                evals: &mut usize|
     -> Option<(f64, f64, Vec<f64>)> {
        for _ in 0..opts.max_line_search_steps {
            let (a_lo, phi_lo, dphi_lo) = lo;
            let (a_hi, phi_hi, dphi_hi) = hi;
            let width = a_hi - a_lo;
            if width.abs() < 1e-16 * a_lo.abs().max(1.0) {
                return None;
            }
            // cubic Hermite minimizer, safeguarded toward bisection
            let mut a_j = {
                let d1 = dphi_lo + dphi_hi - 3.0 * (phi_lo - phi_hi) / (a_lo - a_hi);
                let disc = d1 * d1 - dphi_lo * dphi_hi;
                if disc >= 0.0 {
                    let d2 = disc.sqrt() * width.signum();
                    a_hi - width * (dphi_hi + d2 - d1) / (dphi_hi - dphi_lo + 2.0 * d2)
                } else {
                    f64::NAN
                }
            };
            let lo_bound = a_lo + 0.05 * width;
            let hi_bound = a_hi - 0.05 * width;
            let (lo_b, hi_b) = if lo_bound <= hi_bound {
                (lo_bound, hi_bound)
            } else {
                (hi_bound, lo_bound)
            };
            if !a_j.is_finite() || a_j < lo_b || a_j > hi_b {
                a_j = 0.5 * (a_lo + a_hi);
            }

            let (phi_j, g_j, dphi_j) = probe(obj, a_j, evals);
            if phi_j > phi0 + c1 * a_j * dphi0 || phi_j >= phi_lo {
                hi = (a_j, phi_j, dphi_j);
            } else {
                if dphi_j.abs() <= -c2 * dphi0 {
                    return Some((a_j, phi_j, g_j));
                }
                if dphi_j * (a_hi - a_lo) >= 0.0 {
                    hi = lo;
                }
                lo = (a_j, phi_j, dphi_j);
            }
        }
        None
    };

    let mut a_prev = 0.0f64;
    let mut phi_prev = phi0;
    let mut dphi_prev = dphi0;
    let mut alpha = alpha_init.min(alpha_max);

    for i in 0..opts.max_line_search_steps {
        let (phi_a, g_a, dphi_a) = probe(obj, alpha, evaluations);
        if phi_a > phi0 + c1 * alpha * dphi0 || (i > 0 && phi_a >= phi_prev) {
            return zoom(
                obj,
                (a_prev, phi_prev, dphi_prev),
                (alpha, phi_a, dphi_a),
                evaluations,
            );
        }
        if dphi_a.abs() <= -c2 * dphi0 {
            return Some((alpha, phi_a, g_a));
        }
        if dphi_a >= 0.0 {
            return zoom(
                obj,
                (alpha, phi_a, dphi_a),
                (a_prev, phi_prev, dphi_prev),
                evaluations,
            );
        }
        a_prev = alpha;
        phi_prev = phi_a;
        dphi_prev = dphi_a;
        if alpha >= alpha_max {
            return None;
        }
        alpha = (2.0 * alpha).min(alpha_max);
    }
    None
}
