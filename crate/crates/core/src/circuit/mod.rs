//! Circuit tapes and their execution on a simulated device.
//!
//! A [`CircuitTape`] is immutable once built. Its gate slots hold either a
//! literal angle or a (scaled) reference into a flat parameter vector, and
//! [`CircuitTape::bind_params`] turns it into a concrete gate list.

mod text;

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::ops::{check_wires, Gate, GateKind, Observable, Pauli};
use crate::statevector::{apply_unchecked, Statevector, DEFAULT_MAX_QUBITS};

pub use text::parse_tape;

/// Angle source for a parameterized gate slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Literal(f64),
    /// `scale * params[index]`.
    Ref { index: usize, scale: f64 },
}

impl Param {
    pub fn r#ref(index: usize) -> Self {
        Param::Ref { index, scale: 1.0 }
    }

    fn resolve(self, params: &[f64]) -> f64 {
        match self {
            Param::Literal(v) => v,
            Param::Ref { index, scale } => scale * params[index],
        }
    }
}

/// One gate slot on a tape.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub kind: GateKind,
    pub wires: Vec<usize>,
    pub param: Option<Param>,
}

impl From<Gate> for Operation {
    fn from(g: Gate) -> Self {
        Operation {
            kind: g.kind(),
            wires: g.wires().to_vec(),
            param: g.param().map(Param::Literal),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementSpec {
    Expval(Observable),
    ExpvalList(Vec<Observable>),
    Probs(Vec<usize>),
}

impl MeasurementSpec {
    fn observables(&self) -> &[Observable] {
        match self {
            MeasurementSpec::Expval(o) => std::slice::from_ref(o),
            MeasurementSpec::ExpvalList(list) => list,
            MeasurementSpec::Probs(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExecutionResult {
    Expval(f64),
    ExpvalList(Vec<f64>),
    Probs(Vec<f64>),
}

impl ExecutionResult {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            ExecutionResult::Expval(v) => Some(*v),
            _ => None,
        }
    }

    /// Flattens to a vector; a scalar becomes a one-element vector.
    pub fn into_vec(self) -> Vec<f64> {
        match self {
            ExecutionResult::Expval(v) => vec![v],
            ExecutionResult::ExpvalList(v) | ExecutionResult::Probs(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceMode {
    Analytic,
    Shots { shots: u64, seed: u64 },
}

/// Execution target. Counts every circuit execution it serves.
#[derive(Debug)]
pub struct Device {
    mode: DeviceMode,
    max_qubits: usize,
    executions: AtomicU64,
}

impl Device {
    pub fn analytic() -> Self {
        Self::new(DeviceMode::Analytic)
    }

    /// # Panics
    /// If `shots == 0`.
    pub fn shots(shots: u64, seed: u64) -> Self {
        assert!(shots >= 1, "shot count must be at least 1");
        Self::new(DeviceMode::Shots { shots, seed })
    }

    pub fn new(mode: DeviceMode) -> Self {
        Device {
            mode,
            max_qubits: DEFAULT_MAX_QUBITS,
            executions: AtomicU64::new(0),
        }
    }

    pub fn with_max_qubits(mut self, max_qubits: usize) -> Self {
        self.max_qubits = max_qubits;
        self
    }

    pub fn mode(&self) -> DeviceMode {
        self.mode
    }

    pub fn is_analytic(&self) -> bool {
        self.mode == DeviceMode::Analytic
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    pub fn execution_count(&self) -> u64 {
        self.executions.load(Ordering::Relaxed)
    }

    pub fn reset_execution_count(&self) {
        self.executions.store(0, Ordering::Relaxed);
    }

    pub(crate) fn record_execution(&self) {
        self.executions.fetch_add(1, Ordering::Relaxed);
    }
}

impl Clone for Device {
    fn clone(&self) -> Self {
        Device {
            mode: self.mode,
            max_qubits: self.max_qubits,
            executions: AtomicU64::new(self.execution_count()),
        }
    }
}

impl Default for Device {
    fn default() -> Self {
        Self::analytic()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitTape {
    n_qubits: usize,
    n_params: usize,
    initial_state: Option<Statevector>,
    ops: Vec<Operation>,
    measurement: MeasurementSpec,
}

impl CircuitTape {
    pub fn builder(n_qubits: usize) -> TapeBuilder {
        TapeBuilder {
            n_qubits,
            n_params: None,
            initial_state: None,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn measurement(&self) -> &MeasurementSpec {
        &self.measurement
    }

    pub fn initial_state(&self) -> Option<&Statevector> {
        self.initial_state.as_ref()
    }

    /// Same gates, different measurement.
    pub fn with_measurement(&self, measurement: MeasurementSpec) -> Result<CircuitTape> {
        let tape = CircuitTape {
            measurement,
            ..self.clone()
        };
        tape.validate_measurement()?;
        Ok(tape)
    }

    /// Resolves every parameter slot against `params`.
    pub fn bind_params(&self, params: &[f64]) -> Result<Vec<Gate>> {
        if params.len() != self.n_params {
            return Err(Error::Shape(format!(
                "tape declares {} parameter(s), got {}",
                self.n_params,
                params.len()
            )));
        }
        self.ops
            .iter()
            .map(|op| {
                let angles: Vec<f64> = op.param.iter().map(|p| p.resolve(params)).collect();
                Gate::new(op.kind, &op.wires, &angles)
            })
            .collect()
    }

    /// Positions of trainable slots as `(operation index, parameter index, scale)`.
    pub fn trainable_slots(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.ops.iter().enumerate().filter_map(|(i, op)| match op.param {
            Some(Param::Ref { index, scale }) => Some((i, index, scale)),
            _ => None,
        })
    }

    pub fn execute(&self, device: &Device, params: &[f64]) -> Result<ExecutionResult> {
        let gates = self.bind_params(params)?;
        self.execute_gates(&gates, device)
    }

    /// Runs an already-bound gate list (same length and layout as the tape).
    pub(crate) fn execute_gates(&self, gates: &[Gate], device: &Device) -> Result<ExecutionResult> {
        let state = self.simulate(gates, device)?;
        device.record_execution();
        match device.mode() {
            DeviceMode::Analytic => measure_analytic(&state, &self.measurement),
            DeviceMode::Shots { shots, seed } => {
                measure_shots(&state, &self.measurement, shots, seed)
            }
        }
    }

    /// Final statevector for a bound gate list.
    pub(crate) fn simulate(&self, gates: &[Gate], device: &Device) -> Result<Statevector> {
        if self.n_qubits > device.max_qubits() {
            return Err(Error::Capacity(format!(
                "tape needs {} qubits, device allows {}",
                self.n_qubits,
                device.max_qubits()
            )));
        }
        let mut state = match &self.initial_state {
            Some(s) => s.clone(),
            None => Statevector::zero_with_limit(self.n_qubits, device.max_qubits())?,
        };
        for g in gates {
            state.apply(g)?;
        }
        Ok(state)
    }

    /// Final statevector for `params` on an analytic register.
    pub fn state(&self, params: &[f64]) -> Result<Statevector> {
        let gates = self.bind_params(params)?;
        self.simulate(&gates, &Device::analytic().with_max_qubits(self.n_qubits.max(1)))
    }

    fn validate_measurement(&self) -> Result<()> {
        let wires_ok = |wires: &[usize]| -> Result<()> {
            match wires.iter().find(|&&w| w >= self.n_qubits) {
                Some(w) => Err(Error::Range(format!(
                    "measured wire {w} out of range for {} qubit(s)",
                    self.n_qubits
                ))),
                None => Ok(()),
            }
        };
        match &self.measurement {
            MeasurementSpec::Probs(wires) => {
                if wires.is_empty() {
                    return Err(Error::Validation("probs needs at least one wire".into()));
                }
                let mut sorted = wires.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|p| p[0] == p[1]) {
                    return Err(Error::Range(format!("duplicate wire in {wires:?}")));
                }
                wires_ok(wires)
            }
            MeasurementSpec::ExpvalList(list) if list.is_empty() => {
                Err(Error::Validation("expectation list is empty".into()))
            }
            m => {
                for obs in m.observables() {
                    obs.validate()?;
                    wires_ok(&obs.wires())?;
                }
                Ok(())
            }
        }
    }
}

/// Free-function form of [`CircuitTape::execute`].
pub fn execute(tape: &CircuitTape, device: &Device, params: &[f64]) -> Result<ExecutionResult> {
    tape.execute(device, params)
}

#[derive(Debug, Clone)]
pub struct TapeBuilder {
    n_qubits: usize,
    n_params: Option<usize>,
    initial_state: Option<Statevector>,
    ops: Vec<Operation>,
}

impl TapeBuilder {
    pub fn gate(mut self, gate: Gate) -> Self {
        self.ops.push(gate.into());
        self
    }

    pub fn gates(mut self, gates: impl IntoIterator<Item = Gate>) -> Self {
        self.ops.extend(gates.into_iter().map(Operation::from));
        self
    }

    pub fn op(mut self, op: Operation) -> Self {
        self.ops.push(op);
        self
    }

    pub fn ops(mut self, ops: impl IntoIterator<Item = Operation>) -> Self {
        self.ops.extend(ops);
        self
    }

    /// Rotation whose angle is `params[index]`.
    pub fn param_gate(self, kind: GateKind, wires: &[usize], index: usize) -> Self {
        self.scaled_param_gate(kind, wires, index, 1.0)
    }

    /// Rotation whose angle is `scale * params[index]`.
    pub fn scaled_param_gate(
        mut self,
        kind: GateKind,
        wires: &[usize],
        index: usize,
        scale: f64,
    ) -> Self {
        self.ops.push(Operation {
            kind,
            wires: wires.to_vec(),
            param: Some(Param::Ref { index, scale }),
        });
        self
    }

    /// Declared parameter count; defaults to one past the largest reference.
    pub fn n_params(mut self, n: usize) -> Self {
        self.n_params = Some(n);
        self
    }

    /// Start from this state instead of `|0…0⟩`.
    pub fn initial_state(mut self, state: Statevector) -> Self {
        self.initial_state = Some(state);
        self
    }

    pub fn measure(self, measurement: MeasurementSpec) -> Result<CircuitTape> {
        if self.n_qubits == 0 {
            return Err(Error::Size("tape needs at least one qubit".into()));
        }
        let max_ref = self
            .ops
            .iter()
            .filter_map(|op| match op.param {
                Some(Param::Ref { index, .. }) => Some(index + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let n_params = self.n_params.unwrap_or(max_ref);
        if max_ref > n_params {
            return Err(Error::Validation(format!(
                "parameter reference ${} exceeds declared count {n_params}",
                max_ref - 1
            )));
        }
        if let Some(s) = &self.initial_state {
            if s.n_qubits() != self.n_qubits {
                return Err(Error::Shape(format!(
                    "initial state has {} qubit(s), tape has {}",
                    s.n_qubits(),
                    self.n_qubits
                )));
            }
        }
        for (i, op) in self.ops.iter().enumerate() {
            check_wires(op.kind, &op.wires)
                .map_err(|e| Error::Validation(format!("operation {i}: {e}")))?;
            if let Some(&w) = op.wires.iter().find(|&&w| w >= self.n_qubits) {
                return Err(Error::Range(format!(
                    "operation {i}: wire {w} out of range for {} qubit(s)",
                    self.n_qubits
                )));
            }
            if op.kind.is_parameterized() != op.param.is_some() {
                return Err(Error::Validation(format!(
                    "operation {i}: parameter slot does not match {}",
                    op.kind
                )));
            }
        }
        let tape = CircuitTape {
            n_qubits: self.n_qubits,
            n_params,
            initial_state: self.initial_state,
            ops: self.ops,
            measurement,
        };
        tape.validate_measurement()?;
        Ok(tape)
    }
}

fn measure_analytic(state: &Statevector, m: &MeasurementSpec) -> Result<ExecutionResult> {
    Ok(match m {
        MeasurementSpec::Expval(o) => ExecutionResult::Expval(state.expectation(o)?),
        MeasurementSpec::ExpvalList(list) => ExecutionResult::ExpvalList(
            list.iter()
                .map(|o| state.expectation(o))
                .collect::<Result<_>>()?,
        ),
        MeasurementSpec::Probs(w) => ExecutionResult::Probs(state.probabilities(w)?),
    })
}

fn measure_shots(
    state: &Statevector,
    m: &MeasurementSpec,
    shots: u64,
    seed: u64,
) -> Result<ExecutionResult> {
    let rng_for = |stream: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    };
    Ok(match m {
        MeasurementSpec::Probs(wires) => {
            let counts = state.sample_counts(wires, shots, &mut rng_for(0))?;
            ExecutionResult::Probs(counts.iter().map(|&c| c as f64 / shots as f64).collect())
        }
        MeasurementSpec::Expval(o) => {
            ExecutionResult::Expval(sampled_expectation(state, o, shots, &mut rng_for(0))?)
        }
        MeasurementSpec::ExpvalList(list) => ExecutionResult::ExpvalList(
            list.iter()
                .enumerate()
                .map(|(i, o)| sampled_expectation(state, o, shots, &mut rng_for(i as u64)))
                .collect::<Result<_>>()?,
        ),
    })
}

/// Estimates a Pauli-word expectation by rotating each factor into the Z basis
/// and averaging the sampled parities.
fn sampled_expectation(
    state: &Statevector,
    obs: &Observable,
    shots: u64,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let factors = obs.pauli_factors().ok_or_else(|| {
        Error::Unsupported("Hermitian-matrix observables require an analytic device".into())
    })?;
    let mut rotated = state.clone();
    let n = rotated.n_qubits();
    let h = Gate::h(0).matrix();
    let s_dag = CMatrix::from_vec(
        2,
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
        ],
    )?;
    for &(p, w) in &factors {
        match p {
            Pauli::Z => {}
            Pauli::X => apply_unchecked(rotated.amps_mut(), n, &h, &[w]),
            Pauli::Y => {
                apply_unchecked(rotated.amps_mut(), n, &s_dag, &[w]);
                apply_unchecked(rotated.amps_mut(), n, &h, &[w]);
            }
        }
    }
    let wires: Vec<usize> = factors.iter().map(|f| f.1).collect();
    let counts = rotated.sample_counts(&wires, shots, rng)?;
    let signed: i64 = counts
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            if idx.count_ones() % 2 == 0 {
                c as i64
            } else {
                -(c as i64)
            }
        })
        .sum();
    Ok(signed as f64 / shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell_tape() -> CircuitTape {
        CircuitTape::builder(2)
            .gate(Gate::h(0))
            .gate(Gate::cnot(0, 1))
            .measure(MeasurementSpec::Probs(vec![0, 1]))
            .unwrap()
    }

    #[test]
    fn bind_resolves_references() {
        let tape = CircuitTape::builder(1)
            .param_gate(GateKind::RY, &[0], 0)
            .measure(MeasurementSpec::Expval(Observable::z(0)))
            .unwrap();
        assert_eq!(tape.bind_params(&[0.3]).unwrap(), vec![Gate::ry(0.3, 0)]);

        let swapped = CircuitTape::builder(1)
            .param_gate(GateKind::RY, &[0], 1)
            .param_gate(GateKind::RY, &[0], 0)
            .measure(MeasurementSpec::Expval(Observable::z(0)))
            .unwrap();
        assert_eq!(
            swapped.bind_params(&[0.1, 0.2]).unwrap(),
            vec![Gate::ry(0.2, 0), Gate::ry(0.1, 0)]
        );

        assert_eq!(
            bell_tape().bind_params(&[]).unwrap(),
            vec![Gate::h(0), Gate::cnot(0, 1)]
        );
        assert!(matches!(bell_tape().bind_params(&[1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn scaled_references() {
        let tape = CircuitTape::builder(2)
            .scaled_param_gate(GateKind::IsingZZ, &[0, 1], 0, 2.0)
            .measure(MeasurementSpec::Expval(Observable::z(0)))
            .unwrap();
        assert_eq!(
            tape.bind_params(&[0.25]).unwrap(),
            vec![Gate::ising_zz(0.5, 0, 1)]
        );
    }

    #[test]
    fn builder_validation() {
        let m = || MeasurementSpec::Expval(Observable::z(0));
        assert!(CircuitTape::builder(1).gate(Gate::x(1)).measure(m()).is_err());
        assert!(CircuitTape::builder(1)
            .param_gate(GateKind::RY, &[0], 2)
            .n_params(2)
            .measure(m())
            .is_err());
        assert!(CircuitTape::builder(1)
            .param_gate(GateKind::H, &[0], 0)
            .measure(m())
            .is_err());
        assert!(CircuitTape::builder(2)
            .measure(MeasurementSpec::ExpvalList(vec![]))
            .is_err());
        assert!(CircuitTape::builder(2)
            .measure(MeasurementSpec::Probs(vec![2]))
            .is_err());
    }

    #[test]
    fn bell_execution() {
        let r = bell_tape().execute(&Device::analytic(), &[]).unwrap();
        let ExecutionResult::Probs(p) = r else {
            panic!("expected probs")
        };
        for (got, want) in p.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_ry_cnot_zz() {
        let tape = CircuitTape::builder(2)
            .param_gate(GateKind::RY, &[0], 0)
            .param_gate(GateKind::RY, &[1], 1)
            .gate(Gate::cnot(0, 1))
            .measure(MeasurementSpec::Expval(Observable::zz(0, 1).unwrap()))
            .unwrap();
        let v = tape.execute(&Device::analytic(), &[0.5, 0.3]).unwrap();
        // CNOT maps Z0 Z1 to Z1, so the value is ⟨Z1⟩ = cos(0.3).
        assert_abs_diff_eq!(v.as_scalar().unwrap(), 0.3f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn capacity_error() {
        let dev = Device::analytic().with_max_qubits(1);
        assert!(matches!(
            bell_tape().execute(&dev, &[]),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn shots_are_deterministic_and_counted() {
        let dev = Device::shots(10_000, 9);
        let a = bell_tape().execute(&dev, &[]).unwrap();
        let b = bell_tape().execute(&dev, &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(dev.execution_count(), 2);
        let ExecutionResult::Probs(p) = a else {
            panic!()
        };
        assert_eq!(p.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn shots_reject_hermitian() {
        let tape = CircuitTape::builder(1)
            .measure(MeasurementSpec::Expval(
                Observable::hermitian(CMatrix::identity(2), vec![0]).unwrap(),
            ))
            .unwrap();
        assert!(matches!(
            tape.execute(&Device::shots(10, 0), &[]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sampled_x_and_y_expectations() {
        // RX(-π/2)|0⟩ points along +Y; RY(π/2)|0⟩ along +X.
        let y_tape = CircuitTape::builder(1)
            .gate(Gate::rx(-std::f64::consts::FRAC_PI_2, 0))
            .measure(MeasurementSpec::Expval(
                Observable::tensor(vec![(Pauli::Y, 0)]).unwrap(),
            ))
            .unwrap();
        let x_tape = CircuitTape::builder(1)
            .gate(Gate::ry(std::f64::consts::FRAC_PI_2, 0))
            .measure(MeasurementSpec::Expval(
                Observable::tensor(vec![(Pauli::X, 0)]).unwrap(),
            ))
            .unwrap();
        let dev = Device::shots(1000, 1);
        for tape in [y_tape, x_tape] {
            assert_abs_diff_eq!(
                tape.execute(&Device::analytic(), &[]).unwrap().as_scalar().unwrap(),
                1.0,
                epsilon = 1e-12
            );
            assert_eq!(tape.execute(&dev, &[]).unwrap().as_scalar(), Some(1.0));
        }
    }
}
