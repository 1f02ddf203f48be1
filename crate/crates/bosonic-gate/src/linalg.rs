// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra: matrix exponential, Hermitian matrix
//! functions, and a few norms used throughout the crate.
//!
//! Hermitian inputs go through `symmetric_eigen`; general matrices use
//! scaling-and-squaring with a Pade(13) approximant (Higham 2005).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Max elementwise absolute deviation from the adjoint.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max elementwise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Induced 1-norm (max absolute column sum).
pub fn one_norm(m: &CMatrix) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (out_col, &k) in order.iter().enumerate() {
        vecs.set_column(out_col, &se.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// Relative eigenvalue cutoff separating rank-deficiency noise from
/// genuine spectral weight in PSD matrix functions. Square roots amplify
/// noise-level eigenvalues as sqrt(eps), so they must be dropped, not
/// clamped.
pub const PSD_NOISE_CUTOFF: f64 = 1e-13;

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues below `PSD_NOISE_CUTOFF` relative to the largest are treated
/// as exact zeros; anything below `-tol` (relative) is rejected.
pub fn sqrtm_psd(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(m);
    let scale = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1e-300);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol * scale {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let cutoff = PSD_NOISE_CUTOFF * scale;
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        if vals[k] <= cutoff {
            continue;
        }
        let s = vals[k].sqrt();
        let col = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += Complex64::new(s, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    Ok(out)
}

/// Matrix exponential by scaling and squaring with Pade(13).
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    // theta_13 from Higham's table
    const THETA_13: f64 = 5.371920351148152;
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a_scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);

    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let c = |k: usize| Complex64::new(B[k], 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &a_scaled * &a_scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = &a_scaled * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);

    let denom = &v - &u;
    let numer = &v + &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is singular");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Builds a column vector from a slice of complex amplitudes.
pub fn cvector(amps: &[Complex64]) -> CVector {
    CVector::from_column_slice(amps)
}

/// Kronecker product, left factor varying slowest.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn random_matrix(n: usize, seed: u64) -> CMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()))
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMatrix::zeros(4, 4);
        let e = expm(&z);
        assert_relative_eq!(max_abs(&(&e - CMatrix::identity(4, 4))), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expm_matches_diagonal_closed_form() {
        let mut d = CMatrix::zeros(3, 3);
        d[(0, 0)] = Complex64::new(0.3, -1.2);
        d[(1, 1)] = Complex64::new(-0.7, 0.4);
        d[(2, 2)] = Complex64::new(0.0, 2.0);
        let e = expm(&d);
        for k in 0..3 {
            let expected = d[(k, k)].exp();
            assert_relative_eq!(e[(k, k)].re, expected.re, epsilon = 1e-12);
            assert_relative_eq!(e[(k, k)].im, expected.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn expm_of_antihermitian_is_unitary() {
        let m = random_matrix(8, 42);
        let ah = (&m - m.adjoint()) * Complex64::new(2.5, 0.0);
        let u = expm(&ah);
        let defect = max_abs(&(&u * u.adjoint() - CMatrix::identity(8, 8)));
        assert!(defect < 1e-12, "unitarity defect {defect:.3e}");
    }

    #[test]
    fn expm_additivity_for_commuting_blocks() {
        // exp(A) exp(A) = exp(2A)
        let m = random_matrix(6, 9);
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let a = h * Complex64::new(0.0, -0.8);
        let e1 = expm(&a);
        let e2 = expm(&(&a * Complex64::new(2.0, 0.0)));
        let defect = max_abs(&(&e1 * &e1 - e2));
        assert!(defect < 1e-11, "defect {defect:.3e}");
    }

    #[test]
    fn sqrtm_recovers_square() {
        let m = random_matrix(6, 7);
        let psd = &m * m.adjoint();
        let s = sqrtm_psd(&psd, 1e-8).unwrap();
        let defect = max_abs(&(&s * &s - psd));
        assert!(defect < 1e-10, "defect {defect:.3e}");
    }

    #[test]
    fn sqrtm_rejects_indefinite() {
        let mut m = CMatrix::identity(3, 3);
        m[(2, 2)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(
            sqrtm_psd(&m, 1e-8),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn eigh_reconstructs() {
        let m = random_matrix(10, 3);
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let (vals, vecs) = eigh(&h);
        let lam = CMatrix::from_diagonal(&DVector::from_iterator(
            10,
            vals.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let recon = &vecs * lam * vecs.adjoint();
        assert!(max_abs(&(recon - h)) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn kron_ordering_left_factor_slowest() {
        let a = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let b = CMatrix::identity(3, 3);
        let k = kron(&a, &b);
        assert_eq!(k.nrows(), 6);
        assert_eq!(k[(0, 3)], ONE);
        assert_eq!(k[(4, 1)], ONE);
        assert_eq!(k[(0, 1)], ZERO);
    }
}
