// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! State metrics: Uhlmann fidelity, cavity Wigner function, and the
//! entanglement entropy of the transmon-cavity bipartition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::SpaceDescriptor;
use crate::linalg::{eigh, sqrtm_psd, CMatrix, CVector};
use crate::states::{DensityMatrix, StateVector};

/// Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
///
/// Symmetric in its arguments; reduces to |<psi|phi>|^2 for pure inputs.
/// Fails if either input is indefinite beyond tolerance.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    // tolerance matches the positivity floor of the Lindblad integrator
    let sqrt_rho = sqrtm_psd(rho.matrix(), 1e-7)?;
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    // inner is Hermitian PSD up to roundoff; its eigenvalues give tr sqrt
    let (vals, _) = eigh(&inner);
    let scale = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1e-300);
    if let Some(&min) = vals.first() {
        if min < -1e-7 * scale {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
    }
    let cutoff = crate::linalg::PSD_NOISE_CUTOFF * scale;
    let tr: f64 = vals
        .iter()
        .filter(|&&v| v > cutoff)
        .map(|&v| v.sqrt())
        .sum();
    Ok((tr * tr).min(1.0))
}

/// Wigner function samples of a cavity state on a rectangular grid.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// Row index follows `xs`, column index follows `ps`.
    pub values: Vec<Vec<f64>>,
    /// Set when at least 1% of the population sits in the top 3 Fock levels,
    /// where truncation makes the samples unreliable.
    pub truncation_warning: bool,
}

impl WignerGrid {
    /// Grid integral by the trapezoidal rule; equals 1 on an adequately wide
    /// grid for well-truncated states.
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.xs.len().saturating_sub(1) {
            let dx = self.xs[i + 1] - self.xs[i];
            for j in 0..self.ps.len().saturating_sub(1) {
                let dp = self.ps[j + 1] - self.ps[j];
                let cell = self.values[i][j]
                    + self.values[i + 1][j]
                    + self.values[i][j + 1]
                    + self.values[i + 1][j + 1];
                acc += 0.25 * cell * dx * dp;
            }
        }
        acc
    }
}

/// Columns of the displacement operator D(alpha) on a truncated Fock space:
/// column n is the displaced Fock state D(alpha)|n>.
///
/// Column 0 is the coherent state; higher columns follow from
/// D a^dag D^dag = a^dag - conj(alpha).
pub fn displaced_fock_columns(dim: usize, alpha: Complex64) -> CMatrix {
    let mut d = CMatrix::zeros(dim, dim);
    // coherent state amplitudes e^{-|a|^2/2} a^n / sqrt(n!)
    let pref = (-0.5 * alpha.norm_sqr()).exp();
    let mut amp = Complex64::new(pref, 0.0);
    d[(0, 0)] = amp;
    for n in 1..dim {
        amp *= alpha / Complex64::new((n as f64).sqrt(), 0.0);
        d[(n, 0)] = amp;
    }
    let alpha_conj = alpha.conj();
    for col in 1..dim {
        let scale = 1.0 / (col as f64).sqrt();
        for m in (1..dim).rev() {
            let raised = Complex64::new((m as f64).sqrt(), 0.0) * d[(m - 1, col - 1)];
            d[(m, col)] = (raised - alpha_conj * d[(m, col - 1)]) * scale;
        }
        d[(0, col)] = -alpha_conj * d[(0, col - 1)] * scale;
    }
    d
}

/// Wigner function of a cavity-only density matrix via displaced parity,
/// W(alpha) = (2/pi) tr[rho D(alpha) Pi D^dag(alpha)] with alpha = x + i p.
///
/// Normalized so that the integral over the (x, p) plane is 1.
pub fn wigner_grid(cavity_rho: &DensityMatrix, xs: &[f64], ps: &[f64]) -> Result<WignerGrid> {
    let dim = cavity_rho.dim();
    if xs.iter().chain(ps.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("Wigner grid axes must be finite"));
    }
    let mut top = 0.0;
    for n in dim.saturating_sub(3)..dim {
        top += cavity_rho.matrix()[(n, n)].re;
    }
    let truncation_warning = top >= 0.01;

    let two_over_pi = 2.0 / std::f64::consts::PI;
    let mut values = vec![vec![0.0; ps.len()]; xs.len()];
    let mut work = CVector::zeros(dim);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &p) in ps.iter().enumerate() {
            let d = displaced_fock_columns(dim, Complex64::new(x, p));
            // sum_n (-1)^n <d_n| rho |d_n>
            let mut acc = 0.0;
            for n in 0..dim {
                let col = d.column(n);
                work.gemv(Complex64::new(1.0, 0.0), cavity_rho.matrix(), &col, Complex64::new(0.0, 0.0));
                let val = col.dotc(&work).re;
                acc += if n % 2 == 0 { val } else { -val };
            }
            values[i][j] = two_over_pi * acc;
        }
    }
    Ok(WignerGrid {
        xs: xs.to_vec(),
        ps: ps.to_vec(),
        values,
        truncation_warning,
    })
}

/// Von Neumann entropy (base-2) of the reduced transmon state of a pure
/// bipartite state. Ranges over [0, log2(transmon_dim)].
pub fn entanglement_entropy(state: &StateVector, space: &SpaceDescriptor) -> f64 {
    let rho = state
        .to_density_matrix()
        .partial_trace_cavity(space);
    let (vals, _) = eigh(rho.matrix());
    -vals
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::make_space;
    use crate::linalg::{expm, max_abs, CMatrix, ONE, ZERO};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pure_dm(amps: &[Complex64]) -> DensityMatrix {
        StateVector::normalized(CVector::from_column_slice(amps))
            .unwrap()
            .to_density_matrix()
    }

    #[test]
    fn fidelity_trivial_cases() {
        let zero = pure_dm(&[ONE, ZERO]);
        let one = pure_dm(&[ZERO, ONE]);
        let plus = pure_dm(&[ONE, ONE]);
        assert_relative_eq!(state_fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(state_fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(state_fidelity(&plus, &zero).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_symmetric_on_random_mixed_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..20 {
            let dim = 6;
            let mut random_psd = || {
                let m = CMatrix::from_fn(dim, dim, |_, _| {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let psd = &m * m.adjoint();
                let tr = psd.trace().re;
                DensityMatrix::new(psd * Complex64::new(1.0 / tr, 0.0)).unwrap()
            };
            let rho = random_psd();
            let sigma = random_psd();
            let f1 = state_fidelity(&rho, &sigma).unwrap();
            let f2 = state_fidelity(&sigma, &rho).unwrap();
            assert!((f1 - f2).abs() < 1e-10, "asymmetry {:.3e}", (f1 - f2).abs());
            assert!((0.0..=1.0).contains(&f1));
        }
    }

    #[test]
    fn fidelity_matches_overlap_for_pure_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let dim = 5;
            let a: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let b: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let sa = StateVector::normalized(CVector::from_column_slice(&a)).unwrap();
            let sb = StateVector::normalized(CVector::from_column_slice(&b)).unwrap();
            let f = state_fidelity(&sa.to_density_matrix(), &sb.to_density_matrix()).unwrap();
            let overlap = sa.overlap(&sb).norm_sqr();
            // rank-deficient eigendecompositions limit this to ~1e-8
            assert_relative_eq!(f, overlap, epsilon = 1e-7, max_relative = 1e-6);
        }
    }

    #[test]
    fn displaced_fock_columns_match_expm() {
        let dim = 40;
        let alpha = Complex64::new(0.7, -0.4);
        let a = crate::hilbert::annihilation(dim);
        let gen = a.adjoint() * alpha - &a * alpha.conj();
        let d_exact = expm(&gen);
        let d_rec = displaced_fock_columns(dim, alpha);
        // agreement away from the truncation edge
        let diff = (&d_exact - &d_rec).view((0, 0), (12, 12)).map(|z| z.norm());
        let max = diff.iter().cloned().fold(0.0, f64::max);
        assert!(max < 1e-9, "max deviation {max:.3e}");
    }

    #[test]
    fn wigner_origin_values() {
        let dim = 20;
        let two_over_pi = 2.0 / std::f64::consts::PI;
        for (fock, sign) in [(0usize, 1.0), (1, -1.0), (2, 1.0)] {
            let rho = DensityMatrix::from_pure(&StateVector::basis(dim, fock));
            let w = wigner_grid(&rho, &[0.0], &[0.0]).unwrap();
            assert_relative_eq!(w.values[0][0], sign * two_over_pi, epsilon = 1e-12);
            assert!(!w.truncation_warning);
        }
    }

    #[test]
    fn wigner_integral_near_unity() {
        // displaced Fock columns need headroom above |alpha_max|^2 at the
        // grid corners, hence the 40-level truncation
        let dim = 40;
        // superposition with mean photon ~2
        let mut amps = vec![ZERO; dim];
        amps[0] = ONE;
        amps[4] = ONE;
        let rho = pure_dm(&amps);
        let axis: Vec<f64> = (0..71).map(|i| -3.5 + 0.1 * i as f64).collect();
        let w = wigner_grid(&rho, &axis, &axis).unwrap();
        let integral = w.integral();
        assert!((integral - 1.0).abs() < 0.02, "integral {integral}");
    }

    #[test]
    fn wigner_warns_on_truncation_pressure() {
        let dim = 10;
        let rho = DensityMatrix::from_pure(&StateVector::basis(dim, 8));
        let w = wigner_grid(&rho, &[0.0], &[0.0]).unwrap();
        assert!(w.truncation_warning);
    }

    #[test]
    fn entropy_of_product_and_bell_states() {
        let space = make_space(2, 4).unwrap();
        let dim = space.total_dim();
        let product = StateVector::basis(dim, space.index(0, 2));
        assert_relative_eq!(entanglement_entropy(&product, &space), 0.0, epsilon = 1e-12);

        let mut v = CVector::zeros(dim);
        v[space.index(0, 0)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[space.index(1, 1)] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = StateVector::new(v).unwrap();
        assert_relative_eq!(entanglement_entropy(&bell, &space), 1.0, epsilon = 1e-12);

        let mut v = CVector::zeros(dim);
        v[space.index(0, 0)] = Complex64::new(0.9f64.sqrt(), 0.0);
        v[space.index(1, 1)] = Complex64::new(0.1f64.sqrt(), 0.0);
        let tilted = StateVector::new(v).unwrap();
        let expected = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert_relative_eq!(entanglement_entropy(&tilted, &space), expected, epsilon = 1e-12);
    }

    #[test]
    fn entropy_invariant_under_local_unitaries() {
        let space = make_space(2, 4).unwrap();
        let dim = space.total_dim();
        let mut v = CVector::zeros(dim);
        v[space.index(0, 0)] = Complex64::new(0.8, 0.1);
        v[space.index(1, 1)] = Complex64::new(0.3, -0.2);
        v[space.index(1, 3)] = Complex64::new(0.2, 0.4);
        let psi = StateVector::normalized(v).unwrap();
        let base = entanglement_entropy(&psi, &space);

        // local unitary on the cavity factor
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = CMatrix::from_fn(4, 4, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let herm = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let u = expm(&(herm * Complex64::new(0.0, 1.0)));
        assert!(max_abs(&(&u * u.adjoint() - CMatrix::identity(4, 4))) < 1e-12);
        let lifted = space.lift_cavity(&u);
        let rotated = StateVector::new(&lifted * psi.amplitudes()).unwrap();
        assert!((entanglement_entropy(&rotated, &space) - base).abs() < 1e-9);
    }
}
