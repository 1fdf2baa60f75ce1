//! Gate and observable catalogue.
//!
//! Rotations follow `R_G(θ) = exp(-iθG/2)`, so `⟨Z⟩` after `RY(θ)|0⟩` is `cos θ`.
//! Two-qubit matrices are written in the local basis `|w0 w1⟩` with the first
//! listed wire as the most significant bit.

use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    RX,
    RY,
    RZ,
    CNOT,
    IsingZZ,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CNOT,
        GateKind::IsingZZ,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::IsingZZ => 2,
            _ => 1,
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(
            self,
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::IsingZZ
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::IsingZZ => "IsingZZ",
        }
    }

    /// Pauli generator `G` of a rotation, as factors relative to the gate's wire slots.
    pub(crate) fn generator(self) -> Option<&'static [(Pauli, usize)]> {
        match self {
            GateKind::RX => Some(&[(Pauli::X, 0)]),
            GateKind::RY => Some(&[(Pauli::Y, 0)]),
            GateKind::RZ => Some(&[(Pauli::Z, 0)]),
            GateKind::IsingZZ => Some(&[(Pauli::Z, 0), (Pauli::Z, 1)]),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Validation(format!("unknown gate '{s}'")))
    }
}

/// A concrete catalogue gate: kind, target wires and (for rotations) one angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    wires: Vec<usize>,
    param: Option<f64>,
}

impl Gate {
    pub fn new(kind: GateKind, wires: &[usize], params: &[f64]) -> Result<Self> {
        check_wires(kind, wires)?;
        let expected = usize::from(kind.is_parameterized());
        if params.len() != expected {
            return Err(Error::Validation(format!(
                "{kind} takes {expected} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(Gate {
            kind,
            wires: wires.to_vec(),
            param: params.first().copied(),
        })
    }

    pub fn h(wire: usize) -> Self {
        Self::fixed(GateKind::H, vec![wire])
    }

    pub fn x(wire: usize) -> Self {
        Self::fixed(GateKind::X, vec![wire])
    }

    pub fn y(wire: usize) -> Self {
        Self::fixed(GateKind::Y, vec![wire])
    }

    pub fn z(wire: usize) -> Self {
        Self::fixed(GateKind::Z, vec![wire])
    }

    pub fn rx(theta: f64, wire: usize) -> Self {
        Self::rotation(GateKind::RX, theta, vec![wire])
    }

    pub fn ry(theta: f64, wire: usize) -> Self {
        Self::rotation(GateKind::RY, theta, vec![wire])
    }

    pub fn rz(theta: f64, wire: usize) -> Self {
        Self::rotation(GateKind::RZ, theta, vec![wire])
    }

    /// # Panics
    /// If `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CNOT wires must differ");
        Self::fixed(GateKind::CNOT, vec![control, target])
    }

    /// # Panics
    /// If `a == b`.
    pub fn ising_zz(phi: f64, a: usize, b: usize) -> Self {
        assert_ne!(a, b, "IsingZZ wires must differ");
        Self::rotation(GateKind::IsingZZ, phi, vec![a, b])
    }

    /// Single-qubit rotation about `axis`.
    pub fn rotation_about(axis: Axis, theta: f64, wire: usize) -> Self {
        Self::rotation(axis.rotation_kind(), theta, vec![wire])
    }

    fn fixed(kind: GateKind, wires: Vec<usize>) -> Self {
        Gate {
            kind,
            wires,
            param: None,
        }
    }

    fn rotation(kind: GateKind, theta: f64, wires: Vec<usize>) -> Self {
        Gate {
            kind,
            wires,
            param: Some(theta),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn param(&self) -> Option<f64> {
        self.param
    }

    pub(crate) fn with_param(&self, theta: f64) -> Self {
        debug_assert!(self.kind.is_parameterized());
        Gate {
            kind: self.kind,
            wires: self.wires.clone(),
            param: Some(theta),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        matrix_of(self)
    }
}

pub(crate) fn check_wires(kind: GateKind, wires: &[usize]) -> Result<()> {
    if wires.len() != kind.arity() {
        return Err(Error::Validation(format!(
            "{kind} acts on {} wire(s), got {}",
            kind.arity(),
            wires.len()
        )));
    }
    if wires.len() == 2 && wires[0] == wires[1] {
        return Err(Error::Validation(format!(
            "{kind} wires must be distinct, got {:?}",
            wires
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Axis {
    X,
    #[default]
    Y,
    Z,
}

impl Axis {
    pub fn rotation_kind(self) -> GateKind {
        match self {
            Axis::X => GateKind::RX,
            Axis::Y => GateKind::RY,
            Axis::Z => GateKind::RZ,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Unitary matrix of a catalogue gate.
pub fn matrix_of(gate: &Gate) -> CMatrix {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let half = gate.param.unwrap_or(0.0) / 2.0;
    let (cos, sin) = (half.cos(), half.sin());
    match gate.kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            CMatrix::from_array([[h, h], [h, -h]])
        }
        GateKind::X => CMatrix::from_array([[zero, one], [one, zero]]),
        GateKind::Y => CMatrix::from_array([[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]]),
        GateKind::Z => CMatrix::from_array([[one, zero], [zero, -one]]),
        GateKind::RX => CMatrix::from_array([
            [c(cos, 0.0), c(0.0, -sin)],
            [c(0.0, -sin), c(cos, 0.0)],
        ]),
        GateKind::RY => {
            CMatrix::from_array([[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]])
        }
        GateKind::RZ => CMatrix::from_array([[c(cos, -sin), zero], [zero, c(cos, sin)]]),
        GateKind::CNOT => CMatrix::from_array([
            [one, zero, zero, zero],
            [zero, one, zero, zero],
            [zero, zero, zero, one],
            [zero, zero, one, zero],
        ]),
        GateKind::IsingZZ => {
            let (m, p) = (c(cos, -sin), c(cos, sin));
            CMatrix::from_array([
                [m, zero, zero, zero],
                [zero, p, zero, zero],
                [zero, zero, p, zero],
                [zero, zero, zero, m],
            ])
        }
    }
}

/// Conjugate transpose as a catalogue gate: rotations negate their angle,
/// every fixed gate in the catalogue is self-adjoint.
pub fn adjoint_of(gate: &Gate) -> Gate {
    match gate.param {
        Some(theta) => gate.with_param(-theta),
        None => gate.clone(),
    }
}

/// Two-term shift rule `∂f = c·[f(θ+s) − f(θ−s)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRule {
    pub shift: f64,
    pub coefficient: f64,
}

/// Every rotation in the catalogue has a Pauli-word generator with spectrum ±1,
/// which fixes `s = π/2`, `c = 1/2`.
pub fn shift_rule_of(gate: &Gate) -> Option<ShiftRule> {
    gate.kind.is_parameterized().then_some(ShiftRule {
        shift: FRAC_PI_2,
        coefficient: 0.5,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::X => matrix_of(&Gate::x(0)),
            Pauli::Y => matrix_of(&Gate::y(0)),
            Pauli::Z => matrix_of(&Gate::z(0)),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    PauliZ(usize),
    /// Pauli factors on distinct wires, kept in ascending wire order.
    PauliTensor(Vec<(Pauli, usize)>),
    Hermitian { matrix: CMatrix, wires: Vec<usize> },
}

impl Observable {
    pub fn z(wire: usize) -> Self {
        Observable::PauliZ(wire)
    }

    /// `Z_a ⊗ Z_b`.
    pub fn zz(a: usize, b: usize) -> Result<Self> {
        Self::tensor(vec![(Pauli::Z, a), (Pauli::Z, b)])
    }

    pub fn tensor(mut factors: Vec<(Pauli, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("empty Pauli tensor".into()));
        }
        factors.sort_by_key(|&(_, w)| w);
        if factors.windows(2).any(|p| p[0].1 == p[1].1) {
            return Err(Error::Validation(format!(
                "Pauli tensor wires must be distinct: {factors:?}"
            )));
        }
        Ok(Observable::PauliTensor(factors))
    }

    pub fn hermitian(matrix: CMatrix, wires: Vec<usize>) -> Result<Self> {
        let obs = Observable::Hermitian { matrix, wires };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Observable::PauliZ(_) => Ok(()),
            Observable::PauliTensor(factors) => {
                let mut wires: Vec<usize> = factors.iter().map(|f| f.1).collect();
                wires.sort_unstable();
                if factors.is_empty() || wires.windows(2).any(|p| p[0] == p[1]) {
                    return Err(Error::Validation(format!(
                        "invalid Pauli tensor {factors:?}"
                    )));
                }
                Ok(())
            }
            Observable::Hermitian { matrix, wires } => {
                let mut sorted = wires.clone();
                sorted.sort_unstable();
                if wires.is_empty() || sorted.windows(2).any(|p| p[0] == p[1]) {
                    return Err(Error::Validation(format!(
                        "Hermitian observable wires must be distinct and nonempty: {wires:?}"
                    )));
                }
                if matrix.dim() != 1 << wires.len() {
                    return Err(Error::Shape(format!(
                        "{0}x{0} matrix on {1} wire(s)",
                        matrix.dim(),
                        wires.len()
                    )));
                }
                if !matrix.is_hermitian(HERMITIAN_TOL) {
                    return Err(Error::Validation("matrix is not Hermitian".into()));
                }
                Ok(())
            }
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match self {
            Observable::PauliZ(w) => vec![*w],
            Observable::PauliTensor(f) => f.iter().map(|&(_, w)| w).collect(),
            Observable::Hermitian { wires, .. } => wires.clone(),
        }
    }

    /// Pauli factors if this is a Pauli word, `None` for explicit matrices.
    pub fn pauli_factors(&self) -> Option<Vec<(Pauli, usize)>> {
        match self {
            Observable::PauliZ(w) => Some(vec![(Pauli::Z, *w)]),
            Observable::PauliTensor(f) => Some(f.clone()),
            Observable::Hermitian { .. } => None,
        }
    }

    /// True when the observable is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        match self.pauli_factors() {
            Some(f) => f.iter().all(|&(p, _)| p == Pauli::Z),
            None => {
                let Observable::Hermitian { matrix, .. } = self else {
                    unreachable!()
                };
                let n = matrix.dim();
                (0..n).all(|i| (0..n).all(|j| i == j || matrix[(i, j)].norm() == 0.0))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn all_gates(theta: f64) -> Vec<Gate> {
        vec![
            Gate::h(0),
            Gate::x(0),
            Gate::y(0),
            Gate::z(0),
            Gate::rx(theta, 0),
            Gate::ry(theta, 0),
            Gate::rz(theta, 0),
            Gate::cnot(0, 1),
            Gate::ising_zz(theta, 0, 1),
        ]
    }

    #[test]
    fn catalogue_is_unitary() {
        for theta in [0.0, 0.3, -1.7, PI, 5.0] {
            for g in all_gates(theta) {
                assert!(matrix_of(&g).is_unitary(1e-12), "{g:?}");
            }
        }
    }

    #[test]
    fn hadamard_matrix() {
        let m = matrix_of(&Gate::h(0));
        let s = FRAC_1_SQRT_2;
        for (i, j, v) in [(0, 0, s), (0, 1, s), (1, 0, s), (1, 1, -s)] {
            assert_eq!(m[(i, j)], c(v, 0.0));
        }
    }

    #[test]
    fn ry_zero_is_identity() {
        assert_eq!(matrix_of(&Gate::ry(0.0, 0)), CMatrix::identity(2));
    }

    #[test]
    fn ry_pi_flips() {
        let m = matrix_of(&Gate::ry(PI, 0));
        let expected = CMatrix::from_array([[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn adjoint_matches_conjugate_transpose() {
        for g in all_gates(0.5) {
            let adj = adjoint_of(&g);
            assert!(matrix_of(&adj).max_abs_diff(&matrix_of(&g).adjoint()) < 1e-12);
        }
        assert_eq!(adjoint_of(&Gate::ry(0.5, 0)), Gate::ry(-0.5, 0));
        assert_eq!(adjoint_of(&Gate::h(0)), Gate::h(0));
        assert_eq!(adjoint_of(&Gate::cnot(0, 1)), Gate::cnot(0, 1));
    }

    #[test]
    fn shift_rules() {
        let expected = Some(ShiftRule {
            shift: FRAC_PI_2,
            coefficient: 0.5,
        });
        assert_eq!(shift_rule_of(&Gate::ry(0.1, 0)), expected);
        assert_eq!(shift_rule_of(&Gate::ising_zz(0.1, 0, 1)), expected);
        assert_eq!(shift_rule_of(&Gate::h(0)), None);
        assert_eq!(shift_rule_of(&Gate::cnot(0, 1)), None);
    }

    #[test]
    fn generator_reproduces_rotation() {
        // exp(-iθG/2) = cos(θ/2) I - i sin(θ/2) G for Pauli words G.
        let theta = 0.83;
        for g in all_gates(theta).into_iter().filter(|g| g.kind().is_parameterized()) {
            let gen = g.kind().generator().unwrap();
            let gm = gen
                .iter()
                .map(|&(p, _)| p.matrix())
                .reduce(|a, b| a.kron(&b))
                .unwrap();
            let dim = gm.dim();
            let mut built = CMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    let id = if i == j { (theta / 2.0).cos() } else { 0.0 };
                    built[(i, j)] = c(id, 0.0) - c(0.0, (theta / 2.0).sin()) * gm[(i, j)];
                }
            }
            assert!(built.max_abs_diff(&matrix_of(&g)) < 1e-14, "{g:?}");
        }
    }

    #[test]
    fn gate_arity_and_param_count_enforced() {
        assert!(Gate::new(GateKind::CNOT, &[0], &[]).is_err());
        assert!(Gate::new(GateKind::CNOT, &[1, 1], &[]).is_err());
        assert!(Gate::new(GateKind::RY, &[0], &[]).is_err());
        assert!(Gate::new(GateKind::H, &[0], &[0.1]).is_err());
        assert_eq!(
            Gate::new(GateKind::IsingZZ, &[0, 2], &[0.4]).unwrap(),
            Gate::ising_zz(0.4, 0, 2)
        );
    }

    #[test]
    fn gate_names_round_trip() {
        for k in GateKind::ALL {
            assert_eq!(k.name().parse::<GateKind>().unwrap(), k);
        }
        assert!("CZ".parse::<GateKind>().is_err());
    }

    #[test]
    fn observable_validation() {
        assert!(Observable::zz(1, 1).is_err());
        let t = Observable::tensor(vec![(Pauli::Z, 3), (Pauli::X, 1)]).unwrap();
        assert_eq!(t.wires(), vec![1, 3]);
        let bad = CMatrix::from_array([[c(0.0, 0.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            Observable::hermitian(bad, vec![0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Observable::hermitian(CMatrix::identity(2), vec![0, 1]),
            Err(Error::Shape(_))
        ));
    }
}
