//! Data-encoding templates and the basic entangling layer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Operation, Param};
use crate::error::{Error, Result};
use crate::ops::{Axis, Gate, GateKind};
use crate::statevector::Statevector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Angle { axis: Axis },
    Amplitude { normalize: bool, pad_with_zeros: bool },
    Basis,
    Iqp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub kind: EmbeddingKind,
    pub wires: Vec<usize>,
}

/// An encoding is either a gate prefix or, for amplitude encoding, a prepared state.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoded {
    Gates(Vec<Gate>),
    State(Statevector),
}

impl EmbeddingConfig {
    /// Encodes `x` on a register of `n_qubits`. Basis encoding expects 0.0/1.0 entries.
    pub fn encode(&self, x: &[f64], n_qubits: usize) -> Result<Encoded> {
        check_wire_set(&self.wires, n_qubits)?;
        Ok(match self.kind {
            EmbeddingKind::Angle { axis } => Encoded::Gates(angle_embedding(x, &self.wires, axis)?),
            EmbeddingKind::Amplitude {
                normalize,
                pad_with_zeros,
            } => Encoded::State(amplitude_embedding(
                x,
                &self.wires,
                n_qubits,
                normalize,
                pad_with_zeros,
            )?),
            EmbeddingKind::Basis => {
                let bits = x
                    .iter()
                    .map(|&v| match v {
                        0.0 => Ok(0u8),
                        1.0 => Ok(1u8),
                        v => Err(Error::Validation(format!("basis input {v} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Encoded::Gates(basis_embedding(&bits, &self.wires)?)
            }
            EmbeddingKind::Iqp => Encoded::Gates(iqp_embedding(x, &self.wires)?),
        })
    }
}

fn check_wire_set(wires: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &w) in wires.iter().enumerate() {
        if w >= n_qubits {
            return Err(Error::Range(format!(
                "wire {w} out of range for {n_qubits} qubit(s)"
            )));
        }
        if wires[..i].contains(&w) {
            return Err(Error::Range(format!("duplicate wire {w}")));
        }
    }
    Ok(())
}

/// One `R_axis(x[i])` on `wires[i]`; surplus wires are left alone.
pub fn angle_embedding(x: &[f64], wires: &[usize], axis: Axis) -> Result<Vec<Gate>> {
    if x.len() > wires.len() {
        return Err(Error::Shape(format!(
            "{} features for {} wire(s)",
            x.len(),
            wires.len()
        )));
    }
    Ok(x.iter()
        .zip(wires)
        .map(|(&v, &w)| Gate::rotation_about(axis, v, w))
        .collect())
}

/// Writes `x` (optionally zero-padded and normalised) into the amplitudes of
/// `wires`; every other wire of the `n_qubits` register stays in `|0⟩`.
pub fn amplitude_embedding(
    x: &[f64],
    wires: &[usize],
    n_qubits: usize,
    normalize: bool,
    pad_with_zeros: bool,
) -> Result<Statevector> {
    check_wire_set(wires, n_qubits)?;
    let k = wires.len();
    let dim = 1usize << k;
    if x.len() > dim || (!pad_with_zeros && x.len() != dim) {
        return Err(Error::Shape(format!(
            "{} amplitudes for {k} wire(s) (pad_with_zeros = {pad_with_zeros})",
            x.len()
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (local, &v) in x.iter().enumerate() {
        let global: usize = wires
            .iter()
            .enumerate()
            .filter(|&(j, _)| local & (1 << (k - 1 - j)) != 0)
            .map(|(_, &w)| 1usize << (n_qubits - 1 - w))
            .sum();
        amps[global] = Complex64::new(v, 0.0);
    }
    if normalize {
        Statevector::from_amplitudes_normalized(n_qubits, amps)
    } else {
        Statevector::from_amplitudes(n_qubits, amps)
    }
}

/// `X` on every wire whose bit is 1.
pub fn basis_embedding(bits: &[u8], wires: &[usize]) -> Result<Vec<Gate>> {
    if bits.len() != wires.len() {
        return Err(Error::Shape(format!(
            "{} bits for {} wire(s)",
            bits.len(),
            wires.len()
        )));
    }
    bits.iter()
        .zip(wires)
        .filter_map(|(&b, &w)| match b {
            0 => None,
            1 => Some(Ok(Gate::x(w))),
            b => Some(Err(Error::Validation(format!("basis input {b} is not 0 or 1")))),
        })
        .collect()
}

/// `1` where `x > threshold`, else `0`.
pub fn threshold_bits(x: &[f64], threshold: f64) -> Vec<u8> {
    x.iter().map(|&v| u8::from(v > threshold)).collect()
}

/// Hadamards, then `RZ(x_i)` per wire, then `IsingZZ(x_i·x_j)` for every pair `i < j`.
pub fn iqp_embedding(x: &[f64], wires: &[usize]) -> Result<Vec<Gate>> {
    if x.len() != wires.len() {
        return Err(Error::Shape(format!(
            "{} features for {} wire(s)",
            x.len(),
            wires.len()
        )));
    }
    let mut gates: Vec<Gate> = wires.iter().map(|&w| Gate::h(w)).collect();
    gates.extend(x.iter().zip(wires).map(|(&v, &w)| Gate::rz(v, w)));
    for i in 0..wires.len() {
        for j in i + 1..wires.len() {
            gates.push(Gate::ising_zz(x[i] * x[j], wires[i], wires[j]));
        }
    }
    Ok(gates)
}

/// Layer structure shared by the concrete and tape forms: rotations on every
/// wire, then a CNOT ring (a single CNOT for two wires, none for one).
type Layout<P> = Vec<(GateKind, Vec<usize>, Option<P>)>;

fn entangler_layout<P: Copy>(layers: &[Vec<P>], wires: &[usize], rotation: Axis) -> Result<Layout<P>> {
    let n = wires.len();
    let mut out = Vec::new();
    for (l, row) in layers.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "layer {l} has {} parameters for {n} wire(s)",
                row.len()
            )));
        }
        out.extend(
            row.iter()
                .zip(wires)
                .map(|(&p, &w)| (rotation.rotation_kind(), vec![w], Some(p))),
        );
        let ring = match n {
            0 | 1 => 0,
            2 => 1,
            _ => n,
        };
        out.extend((0..ring).map(|i| (GateKind::CNOT, vec![wires[i], wires[(i + 1) % n]], None)));
    }
    Ok(out)
}

pub fn basic_entangler_layers(
    params: &[Vec<f64>],
    wires: &[usize],
    rotation: Axis,
) -> Result<Vec<Gate>> {
    entangler_layout(params, wires, rotation)?
        .into_iter()
        .map(|(kind, w, p)| Gate::new(kind, &w, p.as_slice()))
        .collect()
}

/// Tape form of [`basic_entangler_layers`]: rotation `(l, i)` reads
/// `params[first_index + l * wires.len() + i]`.
pub fn basic_entangler_ops(
    n_layers: usize,
    wires: &[usize],
    rotation: Axis,
    first_index: usize,
) -> Vec<Operation> {
    let n = wires.len();
    let refs: Vec<Vec<Param>> = (0..n_layers)
        .map(|l| (0..n).map(|i| Param::r#ref(first_index + l * n + i)).collect())
        .collect();
    entangler_layout(&refs, wires, rotation)
        .expect("rows built with the right width")
        .into_iter()
        .map(|(kind, wires, param)| Operation { kind, wires, param })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitTape, Device, MeasurementSpec};
    use crate::ops::Observable;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn run(n: usize, gates: Vec<Gate>) -> Statevector {
        let mut s = Statevector::zero(n).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        s
    }

    #[test]
    fn angle_embedding_cases() {
        let s = run(4, angle_embedding(&[0.0; 4], &[0, 1, 2, 3], Axis::Y).unwrap());
        assert_eq!(s, Statevector::zero(4).unwrap());

        let s = run(1, angle_embedding(&[PI], &[0], Axis::Y).unwrap());
        assert_abs_diff_eq!(s.expectation(&Observable::z(0)).unwrap(), -1.0, epsilon = 1e-12);

        let s = run(2, angle_embedding(&[0.5, 0.3], &[0, 1], Axis::Y).unwrap());
        assert_abs_diff_eq!(
            s.expectation(&Observable::z(0)).unwrap(),
            0.877_582_561_890_372_8,
            epsilon = 1e-12
        );
        assert!(matches!(
            angle_embedding(&[0.1, 0.2], &[0], Axis::X),
            Err(Error::Shape(_))
        ));
        assert_eq!(
            angle_embedding(&[0.1], &[0, 1], Axis::Z).unwrap(),
            vec![Gate::rz(0.1, 0)]
        );
    }

    #[test]
    fn amplitude_embedding_cases() {
        let s = amplitude_embedding(&[1.0, 0.0, 0.0, 0.0], &[0, 1], 2, false, false).unwrap();
        assert_eq!(s, Statevector::zero(2).unwrap());

        let s = amplitude_embedding(&[3.0, 4.0], &[0], 1, true, false).unwrap();
        let p = s.probabilities(&[0]).unwrap();
        assert_abs_diff_eq!(p[0], 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.64, epsilon = 1e-12);

        let s = amplitude_embedding(&[1.0, 1.0, 1.0], &[0, 1], 2, true, true).unwrap();
        assert_eq!(s.amplitudes()[3], Complex64::new(0.0, 0.0));

        assert!(matches!(
            amplitude_embedding(&[0.0, 0.0], &[0], 1, true, false),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            amplitude_embedding(&[1.0, 0.0, 0.0], &[0, 1], 2, true, false),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            amplitude_embedding(&[1.0; 5], &[0, 1], 2, true, true),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn amplitude_embedding_on_subset_of_wires() {
        // x on wire 1 of a two-qubit register: wire 0 stays |0⟩.
        let s = amplitude_embedding(&[0.6, 0.8], &[1], 2, false, false).unwrap();
        let a: Vec<f64> = s.amplitudes().iter().map(|c| c.re).collect();
        assert_eq!(a, vec![0.6, 0.8, 0.0, 0.0]);
    }

    #[test]
    fn basis_embedding_cases() {
        let s = run(4, basis_embedding(&[0, 0, 0, 0], &[0, 1, 2, 3]).unwrap());
        assert_eq!(s, Statevector::zero(4).unwrap());

        let s = run(4, basis_embedding(&[1, 0, 1, 0], &[0, 1, 2, 3]).unwrap());
        let p = s.probabilities(&[0, 1, 2, 3]).unwrap();
        assert_eq!(p[0b1010], 1.0);

        assert_eq!(threshold_bits(&[0.5, 0.3, 0.8, 0.2], 0.5), vec![0, 0, 1, 0]);
        assert!(matches!(
            basis_embedding(&[2, 0], &[0, 1]),
            Err(Error::Validation(_))
        ));
        let cfg = EmbeddingConfig {
            kind: EmbeddingKind::Basis,
            wires: vec![0, 1],
        };
        assert!(matches!(cfg.encode(&[0.5, 1.0], 2), Err(Error::Validation(_))));
    }

    #[test]
    fn iqp_pattern() {
        let (a, b) = (0.4, -1.3);
        assert_eq!(
            iqp_embedding(&[a, b], &[0, 1]).unwrap(),
            vec![
                Gate::h(0),
                Gate::h(1),
                Gate::rz(a, 0),
                Gate::rz(b, 1),
                Gate::ising_zz(a * b, 0, 1)
            ]
        );
        assert_eq!(iqp_embedding(&[0.1; 4], &[0, 1, 2, 3]).unwrap().len(), 14);
        let s = run(3, iqp_embedding(&[0.0; 3], &[0, 1, 2]).unwrap());
        for w in 0..3 {
            assert_abs_diff_eq!(s.expectation(&Observable::z(w)).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert!(iqp_embedding(&[0.1], &[0, 1]).is_err());
    }

    #[test]
    fn entangler_layers() {
        let g = basic_entangler_layers(&[vec![0.0, 0.0]], &[0, 1], Axis::Y).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(run(2, g), Statevector::zero(2).unwrap());

        let g = basic_entangler_layers(&[vec![0.1; 4], vec![0.2; 4]], &[0, 1, 2, 3], Axis::Y)
            .unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g[7], Gate::cnot(3, 0));

        assert!(matches!(
            basic_entangler_layers(&[vec![0.1; 3]], &[0, 1], Axis::Y),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn entangler_tape_matches_concrete_layers() {
        let params = [0.3, -0.2, 1.1, 0.7, 0.05, -0.9, 2.0, 0.4];
        let rows: Vec<Vec<f64>> = params.chunks(4).map(<[f64]>::to_vec).collect();
        let wires = [0, 1, 2, 3];
        let x = [0.1, 0.2, 0.3, 0.4];
        let concrete = CircuitTape::builder(4)
            .gates(angle_embedding(&x, &wires, Axis::Y).unwrap())
            .gates(basic_entangler_layers(&rows, &wires, Axis::Y).unwrap())
            .measure(MeasurementSpec::Expval(Observable::z(0)))
            .unwrap();
        let templated = CircuitTape::builder(4)
            .gates(angle_embedding(&x, &wires, Axis::Y).unwrap())
            .ops(basic_entangler_ops(2, &wires, Axis::Y, 0))
            .measure(MeasurementSpec::Expval(Observable::z(0)))
            .unwrap();
        let dev = Device::analytic();
        let a = concrete.execute(&dev, &[]).unwrap().as_scalar().unwrap();
        let b = templated.execute(&dev, &params).unwrap().as_scalar().unwrap();
        assert_eq!(a, b);
        assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn embedding_config_dispatch() {
        let cfg = EmbeddingConfig {
            kind: EmbeddingKind::Amplitude {
                normalize: true,
                pad_with_zeros: false,
            },
            wires: vec![0, 1],
        };
        assert!(matches!(cfg.encode(&[1.0; 4], 2).unwrap(), Encoded::State(_)));
        let cfg = EmbeddingConfig {
            kind: EmbeddingKind::Iqp,
            wires: vec![0, 3],
        };
        assert!(matches!(cfg.encode(&[1.0; 2], 3), Err(Error::Range(_))));
    }
}
