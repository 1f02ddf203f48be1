// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Pure states and density matrices on the product space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::SpaceDescriptor;
use crate::linalg::{eigh, hermiticity_defect, CMatrix, CVector, ZERO};

pub const NORM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const EIGENVALUE_FLOOR: f64 = -1e-8;

/// A pure state, kept normalized to within `NORM_TOL`.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::numerical(
                "state construction",
                format!("norm {norm} deviates from 1 beyond {NORM_TOL:.0e}"),
            ));
        }
        Ok(StateVector { amplitudes })
    }

    /// Normalizes the input; rejects the zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        Ok(StateVector {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// Basis state |i>.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[i] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix { matrix: m }
    }

    /// Population of the top `levels` cavity Fock levels, summed over the
    /// transmon factor. This is the truncation-leakage monitor.
    pub fn top_level_population(&self, space: &SpaceDescriptor, levels: usize) -> f64 {
        let nc = space.cavity_dim();
        let cutoff = nc.saturating_sub(levels);
        let mut pop = 0.0;
        for t in 0..space.transmon_dim() {
            for n in cutoff..nc {
                pop += self.amplitudes[space.index(t, n)].norm_sqr();
            }
        }
        pop
    }
}

/// A density matrix; Hermitian, unit trace, PSD to within tolerances.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix, checking Hermiticity and trace but not the spectrum
    /// (see `validate_spectrum` for the PSD check).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let defect = hermiticity_defect(&matrix);
        if defect > NORM_TOL {
            return Err(Error::numerical(
                "density matrix construction",
                format!("Hermiticity defect {defect:.3e}"),
            ));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::numerical(
                "density matrix construction",
                format!("trace {tr} deviates from 1"),
            ));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        state.to_density_matrix()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Checks that all eigenvalues sit above `EIGENVALUE_FLOOR`.
    pub fn validate_spectrum(&self) -> Result<()> {
        self.validate_spectrum_with(EIGENVALUE_FLOOR)
    }

    /// Spectrum check against a caller-chosen floor (the Lindblad
    /// integrator tolerates -1e-7).
    pub fn validate_spectrum_with(&self, floor: f64) -> Result<()> {
        let (vals, _) = eigh(&self.matrix);
        let min = vals.first().copied().unwrap_or(0.0);
        if min < floor {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(())
    }

    /// Expectation value of a dense operator.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        let mut acc = ZERO;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                acc += op[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc
    }

    /// Traces out the transmon factor, leaving the cavity state.
    pub fn partial_trace_transmon(&self, space: &SpaceDescriptor) -> DensityMatrix {
        let nc = space.cavity_dim();
        let mut out = CMatrix::zeros(nc, nc);
        for n in 0..nc {
            for m in 0..nc {
                let mut acc = ZERO;
                for t in 0..space.transmon_dim() {
                    acc += self.matrix[(space.index(t, n), space.index(t, m))];
                }
                out[(n, m)] = acc;
            }
        }
        DensityMatrix { matrix: out }
    }

    /// Traces out the cavity factor, leaving the transmon state.
    pub fn partial_trace_cavity(&self, space: &SpaceDescriptor) -> DensityMatrix {
        let nt = space.transmon_dim();
        let mut out = CMatrix::zeros(nt, nt);
        for t in 0..nt {
            for s in 0..nt {
                let mut acc = ZERO;
                for n in 0..space.cavity_dim() {
                    acc += self.matrix[(space.index(t, n), space.index(s, n))];
                }
                out[(t, s)] = acc;
            }
        }
        DensityMatrix { matrix: out }
    }

    /// Population of the top `levels` cavity Fock levels.
    pub fn top_level_population(&self, space: &SpaceDescriptor, levels: usize) -> f64 {
        let nc = space.cavity_dim();
        let cutoff = nc.saturating_sub(levels);
        let mut pop = 0.0;
        for t in 0..space.transmon_dim() {
            for n in cutoff..nc {
                pop += self.matrix[(space.index(t, n), space.index(t, n))].re;
            }
        }
        pop
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::make_space;
    use approx::assert_relative_eq;

    #[test]
    fn state_norm_enforced() {
        let v = CVector::from_column_slice(&[Complex64::new(0.6, 0.0), Complex64::new(0.7, 0.0)]);
        assert!(StateVector::new(v.clone()).is_err());
        let s = StateVector::normalized(v).unwrap();
        assert_relative_eq!(s.amplitudes().norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let space = make_space(2, 3).unwrap();
        // |e> (x) |2>
        let psi = StateVector::basis(6, space.index(1, 2));
        let rho = psi.to_density_matrix();
        let cavity = rho.partial_trace_transmon(&space);
        assert_relative_eq!(cavity.matrix()[(2, 2)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(cavity.trace().re, 1.0, epsilon = 1e-14);
        let transmon = rho.partial_trace_cavity(&space);
        assert_relative_eq!(transmon.matrix()[(1, 1)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_of_entangled_state() {
        let space = make_space(2, 2).unwrap();
        // (|g,0> + |e,1>)/sqrt(2): both reduced states maximally mixed
        let mut v = CVector::zeros(4);
        v[space.index(0, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[space.index(1, 1)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = StateVector::new(v).unwrap().to_density_matrix();
        let t = rho.partial_trace_cavity(&space);
        assert_relative_eq!(t.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(t.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(t.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn density_matrix_checks() {
        let m = CMatrix::identity(3, 3) * Complex64::new(1.0 / 3.0, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        rho.validate_spectrum().unwrap();
        assert_relative_eq!(rho.purity(), 1.0 / 3.0, epsilon = 1e-14);

        let bad = CMatrix::identity(3, 3);
        assert!(DensityMatrix::new(bad).is_err());
    }
}
