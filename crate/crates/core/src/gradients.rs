//! Gradients of tape expectations with respect to the flat parameter vector.
//!
//! Three interchangeable methods:
//!
//! * [`DiffMethod::ParameterShift`]: two shifted executions per trainable gate
//!   slot, exact for the catalogue rotations.
//! * [`DiffMethod::FiniteDiff`]: central differences, two executions per parameter.
//! * [`DiffMethod::Adjoint`]: one forward simulation followed by a reverse sweep
//!   that un-applies each gate; analytic devices only. This plays the role of
//!   framework backpropagation on a simulator: the cost is a constant number of
//!   statevector passes per gate, independent of the parameter count.
//!
//! Jacobians are laid out as `jac[observable][parameter]`. A parameter that feeds
//! several gate slots (possibly scaled) accumulates the chain rule over all of them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::{Error, Result};
use crate::ops::{adjoint_of, matrix_of, shift_rule_of, Gate};
use crate::statevector::{apply_pauli_word, apply_unchecked, inner};

pub const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffMethod {
    ParameterShift,
    FiniteDiff { step: f64 },
    Adjoint,
}

impl DiffMethod {
    pub fn finite_diff() -> Self {
        DiffMethod::FiniteDiff {
            step: DEFAULT_FD_STEP,
        }
    }
}

pub type Jacobian = Vec<Vec<f64>>;

/// Gradient of a scalar (`Expval`) tape.
pub fn gradient(
    method: DiffMethod,
    tape: &CircuitTape,
    device: &Device,
    params: &[f64],
) -> Result<Vec<f64>> {
    if !matches!(tape.measurement(), MeasurementSpec::Expval(_)) {
        return Err(Error::Unsupported(
            "gradient needs a single expectation; use jacobian for lists".into(),
        ));
    }
    Ok(jacobian(method, tape, device, params)?.remove(0))
}

/// Jacobian of an `Expval` or `ExpvalList` tape.
pub fn jacobian(
    method: DiffMethod,
    tape: &CircuitTape,
    device: &Device,
    params: &[f64],
) -> Result<Jacobian> {
    check_differentiable(tape)?;
    match method {
        DiffMethod::ParameterShift => shift_jacobian(tape, device, params),
        DiffMethod::FiniteDiff { step } => fd_jacobian(tape, device, params, step),
        DiffMethod::Adjoint => adjoint_jacobian(tape, device, params, None),
    }
}

/// `Σ_i cotangent[i] · ∂⟨O_i⟩/∂θ`. The adjoint method folds the cotangent into
/// a single reverse sweep.
pub fn vjp(
    method: DiffMethod,
    tape: &CircuitTape,
    device: &Device,
    params: &[f64],
    cotangent: &[f64],
) -> Result<Vec<f64>> {
    check_differentiable(tape)?;
    let n_obs = observable_count(tape);
    if cotangent.len() != n_obs {
        return Err(Error::Shape(format!(
            "cotangent has {} entries for {n_obs} observable(s)",
            cotangent.len()
        )));
    }
    if method == DiffMethod::Adjoint {
        return Ok(adjoint_jacobian(tape, device, params, Some(cotangent))?.remove(0));
    }
    let jac = jacobian(method, tape, device, params)?;
    Ok((0..tape.n_params())
        .map(|k| jac.iter().zip(cotangent).map(|(row, c)| c * row[k]).sum())
        .collect())
}

pub fn parameter_shift_grad(tape: &CircuitTape, params: &[f64], device: &Device) -> Result<Vec<f64>> {
    gradient(DiffMethod::ParameterShift, tape, device, params)
}

pub fn finite_diff_grad(
    tape: &CircuitTape,
    params: &[f64],
    device: &Device,
    step: f64,
) -> Result<Vec<f64>> {
    gradient(DiffMethod::FiniteDiff { step }, tape, device, params)
}

pub fn adjoint_grad(tape: &CircuitTape, params: &[f64], device: &Device) -> Result<Vec<f64>> {
    gradient(DiffMethod::Adjoint, tape, device, params)
}

fn check_differentiable(tape: &CircuitTape) -> Result<()> {
    match tape.measurement() {
        MeasurementSpec::Probs(_) => Err(Error::Unsupported(
            "probability measurements are not differentiable here".into(),
        )),
        _ => Ok(()),
    }
}

fn observable_count(tape: &CircuitTape) -> usize {
    match tape.measurement() {
        MeasurementSpec::Expval(_) => 1,
        MeasurementSpec::ExpvalList(l) => l.len(),
        MeasurementSpec::Probs(_) => 0,
    }
}

fn shift_jacobian(tape: &CircuitTape, device: &Device, params: &[f64]) -> Result<Jacobian> {
    let gates = tape.bind_params(params)?;
    let slots: Vec<(usize, usize, f64)> = tape.trainable_slots().collect();

    let shifted = |op: usize, delta: f64| -> Result<Vec<f64>> {
        let mut g = gates.clone();
        let theta = g[op].param().expect("trainable slot has an angle");
        g[op] = g[op].with_param(theta + delta);
        Ok(tape.execute_gates(&g, device)?.into_vec())
    };

    let columns: Vec<Vec<f64>> = slots
        .par_iter()
        .map(|&(op, _, scale)| {
            let rule = shift_rule_of(&gates[op]).ok_or_else(|| {
                Error::Unsupported(format!("{} has no shift rule", gates[op].kind()))
            })?;
            let plus = shifted(op, rule.shift)?;
            let minus = shifted(op, -rule.shift)?;
            Ok(plus
                .iter()
                .zip(&minus)
                .map(|(p, m)| scale * rule.coefficient * (p - m))
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut jac = vec![vec![0.0; tape.n_params()]; observable_count(tape)];
    for (&(_, index, _), col) in slots.iter().zip(&columns) {
        for (row, d) in jac.iter_mut().zip(col) {
            row[index] += d;
        }
    }
    Ok(jac)
}

fn fd_jacobian(tape: &CircuitTape, device: &Device, params: &[f64], step: f64) -> Result<Jacobian> {
    // also rejects NaN
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Validation(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    if params.len() != tape.n_params() {
        return Err(Error::Shape(format!(
            "tape declares {} parameter(s), got {}",
            tape.n_params(),
            params.len()
        )));
    }
    let columns: Vec<Vec<f64>> = (0..params.len())
        .into_par_iter()
        .map(|k| {
            let eval = |delta: f64| {
                let mut p = params.to_vec();
                p[k] += delta;
                tape.execute(device, &p).map(|r| r.into_vec())
            };
            let (plus, minus) = (eval(step)?, eval(-step)?);
            Ok(plus
                .iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect())
        })
        .collect::<Result<_>>()?;
    let n_obs = observable_count(tape);
    Ok((0..n_obs)
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect())
}

/// Reverse sweep. With `cotangent` the observables are folded into one
/// bra `Σ c_i O_i|ψ⟩` and a single row is returned.
fn adjoint_jacobian(
    tape: &CircuitTape,
    device: &Device,
    params: &[f64],
    cotangent: Option<&[f64]>,
) -> Result<Jacobian> {
    if !device.is_analytic() {
        return Err(Error::Unsupported(
            "adjoint differentiation needs an analytic device".into(),
        ));
    }
    let observables = match tape.measurement() {
        MeasurementSpec::Expval(o) => std::slice::from_ref(o),
        MeasurementSpec::ExpvalList(l) => l.as_slice(),
        MeasurementSpec::Probs(_) => unreachable!("checked by caller"),
    };
    let gates = tape.bind_params(params)?;
    let mut psi = tape.simulate(&gates, device)?;
    device.record_execution();
    let n = psi.n_qubits();

    let applied: Vec<Vec<Complex64>> = observables
        .iter()
        .map(|o| psi.apply_observable(o))
        .collect::<Result<_>>()?;
    let mut lambdas = match cotangent {
        None => applied,
        Some(c) => {
            let mut folded = vec![Complex64::new(0.0, 0.0); psi.amplitudes().len()];
            for (vec, &w) in applied.iter().zip(c) {
                for (acc, a) in folded.iter_mut().zip(vec) {
                    *acc += w * a;
                }
            }
            vec![folded]
        }
    };

    let mut slot_of = vec![None; gates.len()];
    for (op, index, scale) in tape.trainable_slots() {
        slot_of[op] = Some((index, scale));
    }

    let mut jac = vec![vec![0.0; tape.n_params()]; lambdas.len()];
    let mut scratch = vec![Complex64::new(0.0, 0.0); psi.amplitudes().len()];
    for (k, gate) in gates.iter().enumerate().rev() {
        if let Some((index, scale)) = slot_of[k] {
            let factors = generator_on_wires(gate)?;
            scratch.copy_from_slice(psi.amplitudes());
            apply_pauli_word(&mut scratch, n, &factors);
            // d⟨O⟩/dθ = 2 Re⟨λ|(-i/2) G |ψ⟩ = Im⟨λ|G|ψ⟩
            for (row, lambda) in jac.iter_mut().zip(&lambdas) {
                row[index] += scale * inner(lambda, &scratch).im;
            }
        }
        let inverse = matrix_of(&adjoint_of(gate));
        apply_unchecked(psi.amps_mut(), n, &inverse, gate.wires());
        for lambda in &mut lambdas {
            apply_unchecked(lambda, n, &inverse, gate.wires());
        }
    }
    Ok(jac)
}

fn generator_on_wires(gate: &Gate) -> Result<Vec<(crate::ops::Pauli, usize)>> {
    let generator = gate.kind().generator().ok_or_else(|| {
        Error::Unsupported(format!("{} has no parameter derivative", gate.kind()))
    })?;
    Ok(generator
        .iter()
        .map(|&(p, slot)| (p, gate.wires()[slot]))
        .collect())
}
