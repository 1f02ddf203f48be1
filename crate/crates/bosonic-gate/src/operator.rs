// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Dense operators plus a minimal sparse (COO) form for hot loops.
//!
//! All operators live on the full transmon (x) cavity product space unless
//! noted otherwise. The dense form is the public carrier; the sparse form
//! backs time propagation and Lindblad dissipators where the matrices have
//! O(dim) nonzeros.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, CMatrix, CVector, ZERO};

/// Tolerance for the Hermiticity flag on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense operator on a Hilbert space of dimension `dim`.
#[derive(Debug, Clone)]
pub struct Operator {
    dim: usize,
    matrix: CMatrix,
    hermitian: bool,
}

impl Operator {
    /// Wraps a square matrix; the Hermitian flag is detected, not asserted.
    pub fn new(matrix: CMatrix) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator must be square");
        let hermitian = hermiticity_defect(&matrix) <= HERMITIAN_TOL;
        Operator {
            dim: matrix.nrows(),
            matrix,
            hermitian,
        }
    }

    /// Wraps a matrix that must be Hermitian to within `HERMITIAN_TOL`.
    pub fn new_hermitian(matrix: CMatrix) -> Result<Self> {
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::numerical(
                "operator construction",
                format!("Hermiticity defect {defect:.3e} exceeds {HERMITIAN_TOL:.0e}"),
            ));
        }
        Ok(Operator {
            dim: matrix.nrows(),
            matrix,
            hermitian: true,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            dim,
            matrix: CMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// <v| A |v>
    pub fn expectation(&self, v: &CVector) -> Complex64 {
        let av = &self.matrix * v;
        v.dotc(&av)
    }

    pub fn to_sparse(&self) -> SparseOp {
        SparseOp::from_dense(&self.matrix, 0.0)
    }
}

/// Coordinate-format sparse operator. Entries are stored row-major sorted;
/// duplicates are merged on construction.
#[derive(Debug, Clone)]
pub struct SparseOp {
    dim: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl SparseOp {
    pub fn from_entries(dim: usize, mut entries: Vec<(u32, u32, Complex64)>) -> Self {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut rows = Vec::with_capacity(entries.len());
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            debug_assert!((r as usize) < dim && (c as usize) < dim);
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *vals.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            vals.push(v);
        }
        SparseOp { dim, rows, cols, vals }
    }

    pub fn from_dense(m: &CMatrix, drop_tol: f64) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.norm() > drop_tol {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        SparseOp::from_entries(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.vals)
            .map(|((&r, &c), &v)| (r, c, v))
    }

    pub fn adjoint(&self) -> SparseOp {
        let entries = self
            .entries()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        SparseOp::from_entries(self.dim, entries)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r as usize, c as usize)] += v;
        }
        m
    }

    /// y += scale * A * x
    pub fn apply_add_scaled(&self, scale: Complex64, x: &[Complex64], y: &mut [Complex64]) {
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            y[r] += scale * self.vals[k] * x[c];
        }
    }

    /// y = A * x
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.fill(ZERO);
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            y[r] += self.vals[k] * x[c];
        }
    }

    /// <psi| A |psi>
    pub fn quadratic_form(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            acc += psi[r].conj() * self.vals[k] * psi[c];
        }
        acc
    }

    /// <phi| A |psi>
    pub fn bilinear_form(&self, phi: &[Complex64], psi: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            acc += phi[r].conj() * self.vals[k] * psi[c];
        }
        acc
    }

    /// out += scale * A * m  (dense right operand, column-major walk)
    pub fn left_mul_add(&self, scale: Complex64, m: &CMatrix, out: &mut CMatrix) {
        let n = self.dim;
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            let w = scale * self.vals[k];
            for j in 0..n {
                out[(r, j)] += w * m[(c, j)];
            }
        }
    }

    /// out += scale * m * A
    pub fn right_mul_add(&self, scale: Complex64, m: &CMatrix, out: &mut CMatrix) {
        let n = self.dim;
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            let w = scale * self.vals[k];
            for i in 0..n {
                out[(i, c)] += m[(i, r)] * w;
            }
        }
    }

    /// out += scale * m * A^dagger
    pub fn right_mul_adjoint_add(&self, scale: Complex64, m: &CMatrix, out: &mut CMatrix) {
        let n = self.dim;
        for k in 0..self.vals.len() {
            let r = self.rows[k] as usize;
            let c = self.cols[k] as usize;
            let w = scale * self.vals[k].conj();
            // A^dagger[(c, r)] = conj(A[(r, c)])
            for i in 0..n {
                out[(i, r)] += m[(i, c)] * w;
            }
        }
    }

    /// 1-norm (max absolute column sum).
    pub fn one_norm(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.dim];
        for k in 0..self.vals.len() {
            col_sums[self.cols[k] as usize] += self.vals[k].norm();
        }
        col_sums.iter().cloned().fold(0.0, f64::max)
    }
}
