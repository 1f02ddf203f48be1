// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Transmon (x) cavity product space and the elementary operators on it.
//!
//! Ordering convention, fixed globally: the transmon factor comes first, so
//! the full-space basis index of |t, n> is `t * cavity_dim + n`. Every lifted
//! operator in this crate is built as `kron(transmon_op, cavity_op)` under
//! that convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, I, ONE};
use crate::operator::Operator;

/// Dimensions of the transmon (x) cavity product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceDescriptor {
    transmon_dim: usize,
    cavity_dim: usize,
}

/// Builds a product-space descriptor. Both factor dimensions must be >= 2.
pub fn make_space(transmon_dim: usize, cavity_dim: usize) -> Result<SpaceDescriptor> {
    if transmon_dim < 2 {
        return Err(Error::invalid(format!(
            "transmon_dim must be >= 2, got {transmon_dim}"
        )));
    }
    if cavity_dim < 2 {
        return Err(Error::invalid(format!(
            "cavity_dim must be >= 2, got {cavity_dim}"
        )));
    }
    Ok(SpaceDescriptor {
        transmon_dim,
        cavity_dim,
    })
}

impl SpaceDescriptor {
    pub fn transmon_dim(&self) -> usize {
        self.transmon_dim
    }

    pub fn cavity_dim(&self) -> usize {
        self.cavity_dim
    }

    pub fn total_dim(&self) -> usize {
        self.transmon_dim * self.cavity_dim
    }

    /// Full-space index of |t, n>.
    pub fn index(&self, t: usize, n: usize) -> usize {
        debug_assert!(t < self.transmon_dim && n < self.cavity_dim);
        t * self.cavity_dim + n
    }

    /// Inverse of `index`.
    pub fn split_index(&self, i: usize) -> (usize, usize) {
        (i / self.cavity_dim, i % self.cavity_dim)
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.total_dim())
    }

    /// Lifts a transmon-factor matrix to the full space.
    pub fn lift_transmon(&self, op: &CMatrix) -> CMatrix {
        assert_eq!(op.nrows(), self.transmon_dim);
        kron(op, &CMatrix::identity(self.cavity_dim, self.cavity_dim))
    }

    /// Lifts a cavity-factor matrix to the full space.
    pub fn lift_cavity(&self, op: &CMatrix) -> CMatrix {
        assert_eq!(op.nrows(), self.cavity_dim);
        kron(
            &CMatrix::identity(self.transmon_dim, self.transmon_dim),
            op,
        )
    }
}

/// Cavity annihilation operator: a|n> = sqrt(n) |n-1>.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// Cavity photon-number operator a^dagger a.
pub fn number_op(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = Complex64::new(n as f64, 0.0);
    }
    m
}

/// Photon-number parity operator (-1)^n.
pub fn parity_op(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

// Transmon operators act on the {|g>, |e>} pair embedded in the lowest two
// levels; basis order is g = 0, e = 1, with sigma_z |e> = +|e>.

pub fn sigma_x(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 1)] = ONE;
    m[(1, 0)] = ONE;
    m
}

pub fn sigma_y(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 1)] = I;
    m[(1, 0)] = -I;
    m
}

pub fn sigma_z(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 0)] = -ONE;
    m[(1, 1)] = ONE;
    m
}

/// Lowering operator sigma_-: |e> -> |g>.
pub fn sigma_minus(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 1)] = ONE;
    m
}

/// Raising operator sigma_+: |g> -> |e>.
pub fn sigma_plus(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(1, 0)] = ONE;
    m
}

/// Excited-state projector |e><e|.
pub fn excited_projector(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(1, 1)] = ONE;
    m
}

/// Ground-state projector |g><g|.
pub fn ground_projector(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 0)] = ONE;
    m
}
