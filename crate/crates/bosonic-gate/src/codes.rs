// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Bosonic encodings and their logical target operations.
//!
//! Three codes are provided: the two lowest binomial codes and the four-leg
//! cat code. Codewords live on the cavity factor; a photon-loss event maps a
//! codeword |k_L> to its error word a|k_L>/||a|k_L>||. Logical gates act as
//! partial isometries supported on the codespace (the recovery gate on the
//! error space), tensored with identity on the transmon.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{annihilation, ground_projector, number_op, SpaceDescriptor};
use crate::linalg::{CMatrix, CVector, ONE, ZERO};
use crate::operator::Operator;
use crate::states::StateVector;

/// Code selector. The cat code carries its coherent amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodeKind {
    Bin11,
    Bin22,
    Cat4 { alpha: Complex64 },
    /// Caller-supplied codewords (see `BosonicCode::custom`).
    Custom,
}

impl CodeKind {
    pub fn label(&self) -> String {
        match self {
            CodeKind::Bin11 => "bin11".to_string(),
            CodeKind::Bin22 => "bin22".to_string(),
            CodeKind::Cat4 { alpha } => format!("cat4(alpha={:.4}{:+.4}i)", alpha.re, alpha.im),
            CodeKind::Custom => "custom".to_string(),
        }
    }
}

/// A bosonic code instance on a concrete cavity truncation.
#[derive(Debug, Clone)]
pub struct BosonicCode {
    pub kind: CodeKind,
    cavity_dim: usize,
    zero_l: CVector,
    one_l: CVector,
    zero_e: CVector,
    one_e: CVector,
    mean_photon: f64,
}

/// Fock basis vector |n> on the cavity factor.
fn fock(dim: usize, n: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[n] = ONE;
    v
}

/// Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
fn coherent(dim: usize, alpha: Complex64) -> CVector {
    let mut v = CVector::zeros(dim);
    let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    v[0] = amp;
    for n in 1..dim {
        amp *= alpha / Complex64::new((n as f64).sqrt(), 0.0);
        v[n] = amp;
    }
    v
}

fn normalized(v: CVector) -> Result<CVector> {
    let norm = v.norm();
    if norm < 1e-12 {
        return Err(Error::numerical("code construction", "zero-norm codeword"));
    }
    Ok(v / Complex64::new(norm, 0.0))
}

/// Builds a code on a cavity of dimension `cavity_dim`.
///
/// Binomial codes require at least 10 levels of headroom above their highest
/// Fock component; the cat code requires |alpha|^2 <= cavity_dim / 3.
pub fn build_code(kind: CodeKind, cavity_dim: usize) -> Result<BosonicCode> {
    let (zero_l, one_l) = match kind {
        CodeKind::Bin11 => {
            require_headroom(cavity_dim, 4, "Bin(1,1)")?;
            let z = (fock(cavity_dim, 0) + fock(cavity_dim, 4))
                / Complex64::new(2.0f64.sqrt(), 0.0);
            (z, fock(cavity_dim, 2))
        }
        CodeKind::Bin22 => {
            require_headroom(cavity_dim, 9, "Bin(2,2)")?;
            let s3 = Complex64::new(3.0f64.sqrt(), 0.0);
            let half = Complex64::new(0.5, 0.0);
            let z = (fock(cavity_dim, 0) + fock(cavity_dim, 6) * s3) * half;
            let o = (fock(cavity_dim, 3) * s3 + fock(cavity_dim, 9)) * half;
            (z, o)
        }
        CodeKind::Custom => {
            return Err(Error::invalid(
                "custom codes are built with BosonicCode::custom",
            ))
        }
        CodeKind::Cat4 { alpha } => {
            if alpha.norm_sqr() > cavity_dim as f64 / 3.0 {
                return Err(Error::invalid(format!(
                    "cat amplitude |alpha|^2 = {:.2} exceeds cavity_dim/3 = {:.2}",
                    alpha.norm_sqr(),
                    cavity_dim as f64 / 3.0
                )));
            }
            let i_alpha = alpha * Complex64::new(0.0, 1.0);
            let legs = [
                coherent(cavity_dim, alpha),
                coherent(cavity_dim, -alpha),
                coherent(cavity_dim, i_alpha),
                coherent(cavity_dim, -i_alpha),
            ];
            let zero = normalized(&legs[0] + &legs[1] + &legs[2] + &legs[3])?;
            let one = normalized(&legs[0] + &legs[1] - &legs[2] - &legs[3])?;
            (zero, one)
        }
    };

    let a = annihilation(cavity_dim);
    let zero_e = normalized(&a * &zero_l)?;
    let one_e = normalized(&a * &one_l)?;

    let n_op = number_op(cavity_dim);
    let mean = |v: &CVector| (v.dotc(&(&n_op * v))).re;
    let mean_photon = 0.5 * (mean(&zero_l) + mean(&one_l));

    Ok(BosonicCode {
        kind,
        cavity_dim,
        zero_l,
        one_l,
        zero_e,
        one_e,
        mean_photon,
    })
}

impl BosonicCode {
    /// Builds a code from caller-supplied cavity codewords. The codewords
    /// must be orthonormal and must not be annihilated by the photon-loss
    /// jump (the error words come from it). Equal per-codeword mean photon
    /// numbers are not enforced here.
    pub fn custom(zero_l: CVector, one_l: CVector) -> Result<BosonicCode> {
        let cavity_dim = zero_l.len();
        if one_l.len() != cavity_dim {
            return Err(Error::DimensionMismatch {
                expected: cavity_dim,
                actual: one_l.len(),
            });
        }
        let tol = 1e-10;
        if (zero_l.norm() - 1.0).abs() > tol || (one_l.norm() - 1.0).abs() > tol {
            return Err(Error::invalid("custom codewords must be normalized"));
        }
        if zero_l.dotc(&one_l).norm() > tol {
            return Err(Error::invalid("custom codewords must be orthogonal"));
        }
        let a = annihilation(cavity_dim);
        let zero_e = normalized(&a * &zero_l)?;
        let one_e = normalized(&a * &one_l)?;
        let n_op = number_op(cavity_dim);
        let mean = |v: &CVector| (v.dotc(&(&n_op * v))).re;
        let mean_photon = 0.5 * (mean(&zero_l) + mean(&one_l));
        Ok(BosonicCode {
            kind: CodeKind::Custom,
            cavity_dim,
            zero_l,
            one_l,
            zero_e,
            one_e,
            mean_photon,
        })
    }
}

fn require_headroom(cavity_dim: usize, max_fock: usize, name: &str) -> Result<()> {
    if cavity_dim < max_fock + 11 {
        return Err(Error::invalid(format!(
            "{name} needs cavity_dim >= {} (highest Fock component {max_fock} plus 10 \
             levels of headroom), got {cavity_dim}",
            max_fock + 11
        )));
    }
    Ok(())
}

impl BosonicCode {
    pub fn cavity_dim(&self) -> usize {
        self.cavity_dim
    }

    pub fn mean_photon(&self) -> f64 {
        self.mean_photon
    }

    /// Codewords on the cavity factor.
    pub fn codewords(&self) -> (&CVector, &CVector) {
        (&self.zero_l, &self.one_l)
    }

    /// Error words a|k_L>/||.||, orthogonal to the codewords.
    pub fn error_words(&self) -> (&CVector, &CVector) {
        (&self.zero_e, &self.one_e)
    }

    /// Cavity-factor superposition c0|0_L> + c1|1_L>, normalized.
    pub fn codespace_state(&self, c0: Complex64, c1: Complex64) -> Result<StateVector> {
        StateVector::normalized(&self.zero_l * c0 + &self.one_l * c1)
    }

    /// Lifts a cavity-factor vector to |g> (x) v on the full space.
    pub fn embed_with_ground(&self, space: &SpaceDescriptor, v: &CVector) -> StateVector {
        assert_eq!(self.cavity_dim, space.cavity_dim());
        let mut full = CVector::zeros(space.total_dim());
        for n in 0..self.cavity_dim {
            full[space.index(0, n)] = v[n];
        }
        StateVector::new(full).expect("embedded codeword is normalized")
    }

    /// The six cardinal codespace states, each tensored with |g>.
    pub fn cardinal_states(&self, space: &SpaceDescriptor) -> Vec<StateVector> {
        self.cardinal_cavity_states()
            .iter()
            .map(|v| self.embed_with_ground(space, v))
            .collect()
    }

    /// Cardinal states on the cavity factor only.
    pub fn cardinal_cavity_states(&self) -> Vec<CVector> {
        superposition_six(&[self.zero_l.clone(), self.one_l.clone()])
    }

    /// Projector |g><g| (x) (|0_L><0_L| + |1_L><1_L|) onto the codespace.
    pub fn codespace_projector(&self, space: &SpaceDescriptor) -> Operator {
        let mut cavity = CMatrix::zeros(self.cavity_dim, self.cavity_dim);
        add_outer(&mut cavity, &self.zero_l, &self.zero_l, ONE);
        add_outer(&mut cavity, &self.one_l, &self.one_l, ONE);
        let full = crate::linalg::kron(&ground_projector(space.transmon_dim()), &cavity);
        Operator::new_hermitian(full).expect("projector is Hermitian")
    }
}

fn add_outer(m: &mut CMatrix, ket: &CVector, bra: &CVector, scale: Complex64) {
    for i in 0..ket.len() {
        if ket[i] == ZERO {
            continue;
        }
        for j in 0..bra.len() {
            m[(i, j)] += scale * ket[i] * bra[j].conj();
        }
    }
}

/// Logical operations with a defined target unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Identity,
    X,
    Z,
    Hadamard,
    PhaseGate { angle: f64 },
    Recovery,
}

impl GateKind {
    pub fn label(&self) -> String {
        match self {
            GateKind::Identity => "identity".into(),
            GateKind::X => "x".into(),
            GateKind::Z => "z".into(),
            GateKind::Hadamard => "hadamard".into(),
            GateKind::PhaseGate { angle } => format!("phase({angle:.4})"),
            GateKind::Recovery => "recovery".into(),
        }
    }
}

/// A logical gate: partial isometry on its input subspace, identity on the
/// transmon. For ordinary gates the input subspace is the codespace; for the
/// recovery gate it is the error space.
#[derive(Debug, Clone)]
pub struct LogicalGate {
    pub kind: GateKind,
    target_unitary: Operator,
    input_basis: [CVector; 2],
    output_basis: [CVector; 2],
}

/// Builds the named logical gate for a code.
pub fn logical_unitary(code: &BosonicCode, space: &SpaceDescriptor, kind: GateKind) -> LogicalGate {
    let (zero_l, one_l) = code.codewords();
    let (zero_e, one_e) = code.error_words();
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

    // images of the two input basis vectors under the logical action
    let (input_basis, out0, out1): ([CVector; 2], CVector, CVector) = match kind {
        GateKind::Identity => (
            [zero_l.clone(), one_l.clone()],
            zero_l.clone(),
            one_l.clone(),
        ),
        GateKind::X => (
            [zero_l.clone(), one_l.clone()],
            one_l.clone(),
            zero_l.clone(),
        ),
        GateKind::Z => (
            [zero_l.clone(), one_l.clone()],
            zero_l.clone(),
            -one_l.clone(),
        ),
        GateKind::Hadamard => (
            [zero_l.clone(), one_l.clone()],
            (zero_l + one_l) * r,
            (zero_l - one_l) * r,
        ),
        GateKind::PhaseGate { angle } => (
            [zero_l.clone(), one_l.clone()],
            zero_l.clone(),
            one_l * Complex64::from_polar(1.0, angle),
        ),
        GateKind::Recovery => (
            [zero_e.clone(), one_e.clone()],
            zero_l.clone(),
            one_l.clone(),
        ),
    };

    let nc = code.cavity_dim();
    let mut cavity = CMatrix::zeros(nc, nc);
    add_outer(&mut cavity, &out0, &input_basis[0], ONE);
    add_outer(&mut cavity, &out1, &input_basis[1], ONE);
    let full = crate::linalg::kron(
        &CMatrix::identity(space.transmon_dim(), space.transmon_dim()),
        &cavity,
    );

    LogicalGate {
        kind,
        target_unitary: Operator::new(full),
        input_basis,
        output_basis: [out0, out1],
    }
}

impl LogicalGate {
    /// The embedded partial isometry (identity on the transmon factor).
    pub fn target_unitary(&self) -> &Operator {
        &self.target_unitary
    }

    /// Input-subspace basis on the cavity factor (codewords, or error words
    /// for the recovery gate).
    pub fn input_basis(&self) -> &[CVector; 2] {
        &self.input_basis
    }

    /// Images of the input basis under the logical action.
    pub fn output_basis(&self) -> &[CVector; 2] {
        &self.output_basis
    }

    /// Six cardinal input states (on the gate's input subspace), tensored
    /// with |g>: the evaluation states for fidelity and susceptibility.
    pub fn cardinal_inputs(&self, code: &BosonicCode, space: &SpaceDescriptor) -> Vec<StateVector> {
        superposition_six(&self.input_basis)
            .into_iter()
            .map(|v| code.embed_with_ground(space, &v))
            .collect()
    }

    /// Ideal images of `cardinal_inputs` under the target action.
    pub fn cardinal_targets(&self, code: &BosonicCode, space: &SpaceDescriptor) -> Vec<StateVector> {
        superposition_six(&self.output_basis)
            .into_iter()
            .map(|v| code.embed_with_ground(space, &v))
            .collect()
    }
}

fn superposition_six(basis: &[CVector; 2]) -> Vec<CVector> {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    vec![
        basis[0].clone(),
        basis[1].clone(),
        (&basis[0] + &basis[1]) * r,
        (&basis[0] - &basis[1]) * r,
        &basis[0] * r + &basis[1] * i,
        &basis[0] * r - &basis[1] * i,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::make_space;
    use crate::linalg::max_abs;
    use approx::assert_relative_eq;

    fn bin11() -> BosonicCode {
        build_code(CodeKind::Bin11, 30).unwrap()
    }

    #[test]
    fn bin11_codewords_and_error_words() {
        let code = bin11();
        let (z, o) = code.codewords();
        assert_relative_eq!(z[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_relative_eq!(z[4].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_relative_eq!(o[2].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(code.mean_photon(), 2.0, epsilon = 1e-12);

        let (ze, oe) = code.error_words();
        assert_relative_eq!(ze[3].norm(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(oe[1].norm(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn bin22_mean_photon_and_error_words() {
        let code = build_code(CodeKind::Bin22, 30).unwrap();
        assert_relative_eq!(code.mean_photon(), 4.5, epsilon = 1e-12);
        let (ze, oe) = code.error_words();
        assert_relative_eq!(ze[5].norm(), 1.0, epsilon = 1e-13);
        // |1_E> = (|2> + |8>)/sqrt(2)
        assert_relative_eq!(oe[2].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
        assert_relative_eq!(oe[8].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
    }

    #[test]
    fn cat4_mean_photon_near_alpha_squared() {
        let alpha = Complex64::new(3.0f64.sqrt(), 0.0);
        let code = build_code(CodeKind::Cat4 { alpha }, 30).unwrap();
        let nbar = code.mean_photon();
        assert!((nbar - 3.0).abs() / 3.0 < 0.05, "mean photon {nbar}");
        // codewords normalized and orthogonal
        let (z, o) = code.codewords();
        assert_relative_eq!(z.norm(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(o.norm(), 1.0, epsilon = 1e-12);
        assert!(z.dotc(o).norm() < 1e-10);
    }

    #[test]
    fn codeword_orthogonality_and_annihilator_moments() {
        let alpha = Complex64::new(3.0f64.sqrt(), 0.0);
        for kind in [CodeKind::Bin11, CodeKind::Bin22, CodeKind::Cat4 { alpha }] {
            let code = build_code(kind, 30).unwrap();
            let (z, o) = code.codewords();
            let (ze, oe) = code.error_words();
            assert!(z.dotc(o).norm() < 1e-10, "{:?}", kind);
            // error words orthogonal to codewords
            for e in [ze, oe] {
                assert!(z.dotc(e).norm() < 1e-10);
                assert!(o.dotc(e).norm() < 1e-10);
            }
            // <0L|a|0L> = <1L|a|1L> = <0L|a|1L> = 0
            let a = annihilation(30);
            assert!(z.dotc(&(&a * z)).norm() < 1e-10);
            assert!(o.dotc(&(&a * o)).norm() < 1e-10);
            assert!(z.dotc(&(&a * o)).norm() < 1e-10);
        }
    }

    #[test]
    fn truncation_safety_checks() {
        assert!(build_code(CodeKind::Bin11, 12).is_err());
        assert!(build_code(CodeKind::Bin22, 18).is_err());
        let alpha = Complex64::new(4.0, 0.0); // |alpha|^2 = 16 > 30/3
        assert!(build_code(CodeKind::Cat4 { alpha }, 30).is_err());
    }

    #[test]
    fn logical_gate_actions() {
        let space = make_space(2, 30).unwrap();
        let code = bin11();

        // X on |g> (x) |0_L> lands on |g> (x) |2>
        let x = logical_unitary(&code, &space, GateKind::X);
        let input = code.embed_with_ground(&space, &code.codewords().0.clone());
        let out = x.target_unitary().apply(input.amplitudes());
        assert_relative_eq!(out[space.index(0, 2)].norm(), 1.0, epsilon = 1e-12);

        // Z flips the relative sign of |+_L>
        let z = logical_unitary(&code, &space, GateKind::Z);
        let plus = code
            .codespace_state(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            .unwrap();
        let plus_full = code.embed_with_ground(&space, plus.amplitudes());
        let out = z.target_unitary().apply(plus_full.amplitudes());
        let minus = code
            .codespace_state(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
            .unwrap();
        let minus_full = code.embed_with_ground(&space, minus.amplitudes());
        let overlap = minus_full.amplitudes().dotc(&out);
        assert_relative_eq!(overlap.norm(), 1.0, epsilon = 1e-12);

        // Recovery maps |g> (x) |3> to |g> (x) |0_L>
        let rec = logical_unitary(&code, &space, GateKind::Recovery);
        let err_state = StateVector::basis(space.total_dim(), space.index(0, 3));
        let out = rec.target_unitary().apply(err_state.amplitudes());
        let target = code.embed_with_ground(&space, &code.codewords().0.clone());
        assert_relative_eq!(target.amplitudes().dotc(&out).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gates_are_isometries_on_their_support() {
        let space = make_space(2, 30).unwrap();
        let code = bin11();
        for kind in [
            GateKind::Identity,
            GateKind::X,
            GateKind::Z,
            GateKind::Hadamard,
            GateKind::PhaseGate { angle: 0.7 },
            GateKind::Recovery,
        ] {
            let gate = logical_unitary(&code, &space, kind);
            let u = gate.target_unitary().matrix();
            let udu = u.adjoint() * u;
            // U^dag U equals the projector onto 1_t (x) span(input basis)
            let nc = code.cavity_dim();
            let mut proj_cav = CMatrix::zeros(nc, nc);
            add_outer(&mut proj_cav, &gate.input_basis()[0], &gate.input_basis()[0], ONE);
            add_outer(&mut proj_cav, &gate.input_basis()[1], &gate.input_basis()[1], ONE);
            let proj = space.lift_cavity(&proj_cav);
            assert!(
                max_abs(&(udu - proj)) < 1e-10,
                "support defect for {:?}",
                kind
            );
        }
    }

    #[test]
    fn x_squared_is_identity_and_hadamard_is_x_plus_z() {
        let space = make_space(2, 30).unwrap();
        let code = bin11();
        let x = logical_unitary(&code, &space, GateKind::X);
        let z = logical_unitary(&code, &space, GateKind::Z);
        let h = logical_unitary(&code, &space, GateKind::Hadamard);
        let id = logical_unitary(&code, &space, GateKind::Identity);

        let xx = x.target_unitary().matrix() * x.target_unitary().matrix();
        assert!(max_abs(&(xx - id.target_unitary().matrix())) < 1e-12);

        // (X + Z)/sqrt(2) agrees with Hadamard on the codespace
        let sum = (x.target_unitary().matrix() + z.target_unitary().matrix())
            * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let p = code.codespace_projector(&space);
        let lhs = &sum * p.matrix();
        let rhs = h.target_unitary().matrix() * p.matrix();
        assert!(max_abs(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn codespace_projector_properties() {
        let space = make_space(2, 30).unwrap();
        let code = bin11();
        let p = code.codespace_projector(&space);
        let m = p.matrix();
        assert!(max_abs(&(m * m - m)) < 1e-12);
        assert_relative_eq!(m.trace().re, 2.0, epsilon = 1e-12);

        // annihilates |e> (x) |0_L>
        let (z, _) = code.codewords();
        let mut v = CVector::zeros(space.total_dim());
        for n in 0..30 {
            v[space.index(1, n)] = z[n];
        }
        assert!((m * v).norm() < 1e-12);
    }

    #[test]
    fn cardinal_states_properties() {
        let space = make_space(2, 30).unwrap();
        let code = bin11();
        let cardinals = code.cardinal_states(&space);
        assert_eq!(cardinals.len(), 6);
        let n_full = crate::hamiltonian::photon_number(&space);
        for s in &cardinals {
            assert_relative_eq!(s.amplitudes().norm(), 1.0, epsilon = 1e-12);
            // equal-mean-photon codewords with zero cross term force <n> = 2
            assert_relative_eq!(n_full.expectation(s.amplitudes()).re, 2.0, epsilon = 1e-10);
        }
        // antipodal pairs are orthogonal
        for (a, b) in [(0, 1), (2, 3), (4, 5)] {
            assert!(cardinals[a].overlap(&cardinals[b]).norm() < 1e-12);
        }
    }
}
