// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form reference values: idle-gate susceptibilities of a bare
//! two-level system and Bloch-sphere moments of sigma_z.

use num_complex::Complex64;

use crate::dynamics::ChannelKind;
use crate::error::{Error, Result};

type TwoLevel = [Complex64; 2];

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The six cardinal states of the transmon Bloch sphere, ordered (g, e).
fn cardinal_two_level() -> [TwoLevel; 6] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let r = Complex64::new(R, 0.0);
    let ir = Complex64::new(0.0, R);
    [
        [z, one],  // |e>
        [one, z],  // |g>
        [r, r.conj()],
        [-r, r],
        [ir, r],
        [-ir, r],
    ]
}

/// s(psi) = <L^dag L> - |<L>|^2 for one transmon channel on one state.
pub fn two_level_susceptibility(kind: ChannelKind, state: &[Complex64; 2]) -> Result<f64> {
    let (g, e) = (state[0], state[1]);
    match kind {
        ChannelKind::TransmonRelaxation => {
            // L = sigma_-: <L^dag L> = |e|^2, <L> = conj(g) e
            let p = e.norm_sqr();
            let l = (g.conj() * e).norm_sqr();
            Ok(p - l)
        }
        ChannelKind::TransmonThermal => {
            let p = g.norm_sqr();
            let l = (e.conj() * g).norm_sqr();
            Ok(p - l)
        }
        ChannelKind::TransmonDephasing => {
            // L = sigma_z / sqrt(2): <L^dag L> = 1/2, <L> = <sigma_z>/sqrt(2)
            let sz = e.norm_sqr() - g.norm_sqr();
            Ok(0.5 - 0.5 * sz * sz)
        }
        ChannelKind::CavityLoss => Err(Error::invalid(
            "idle susceptibility is defined for transmon channels only",
        )),
    }
}

/// Six-state average of the idle (identity-evolution) susceptibility of a
/// bare two-level system. Exactly 1/3 for relaxation and dephasing: the
/// six-state average coincides with the Bloch-sphere integral for these
/// functionals.
pub fn idle_susceptibility(kind: ChannelKind) -> Result<f64> {
    let mut acc = 0.0;
    for state in cardinal_two_level() {
        acc += two_level_susceptibility(kind, &state)?;
    }
    Ok(acc / 6.0)
}

/// Bloch-sphere statistics of <sigma_z> under the uniform measure.
#[derive(Debug, Clone, Copy)]
pub struct SigmaZMoments {
    pub mean: f64,
    pub mean_square: f64,
    pub mean_fourth: f64,
    /// Std[<sigma_z>] = sqrt(1/3)
    pub std: f64,
    /// Std[<sigma_z>^2] = sqrt(1/5 - 1/9)
    pub std_square: f64,
}

/// Computes the moments by Gauss-Legendre quadrature over cos(theta); the
/// rule is exact for these polynomial integrands.
pub fn sigma_z_moment_stats() -> SigmaZMoments {
    let (nodes, weights) = gauss_legendre(16);
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for (&u, &w) in nodes.iter().zip(&weights) {
        // uniform sphere measure: (1/2) du over u = cos(theta)
        m1 += 0.5 * w * u;
        m2 += 0.5 * w * u * u;
        m4 += 0.5 * w * u * u * u * u;
    }
    SigmaZMoments {
        mean: m1,
        mean_square: m2,
        mean_fourth: m4,
        std: (m2 - m1 * m1).sqrt(),
        std_square: (m4 - m2 * m2).sqrt(),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess, Newton refinement on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
