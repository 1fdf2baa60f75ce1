//! Small reference circuits: the Bell pair, the three-angle variational
//! circuit driven toward `⟨Z0⟩ = 1`, and the single-rotation RY circuit.

use serde_json::json;

use super::{optimize, Evaluation, FinalRecord, RunSettings, Trace, TraceConfig};
use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::Result;
use crate::gradients::gradient;
use crate::ops::{Gate, GateKind, Observable};

pub fn bell_tape() -> CircuitTape {
    CircuitTape::builder(2)
        .gate(Gate::h(0))
        .gate(Gate::cnot(0, 1))
        .measure(MeasurementSpec::Probs(vec![0, 1]))
        .expect("static tape")
}

/// `RY(θ)` on one wire, measuring `⟨Z⟩ = cos θ`.
pub fn ry_tape() -> CircuitTape {
    CircuitTape::builder(1)
        .param_gate(GateKind::RY, &[0], 0)
        .measure(MeasurementSpec::Expval(Observable::z(0)))
        .expect("static tape")
}

/// `RY($0)⊗RY($1)`, `CNOT(0,1)`, `RY($2)` on wire 0, measuring `⟨Z0⟩`.
pub fn variational_tape() -> CircuitTape {
    CircuitTape::builder(2)
        .param_gate(GateKind::RY, &[0], 0)
        .param_gate(GateKind::RY, &[1], 1)
        .gate(Gate::cnot(0, 1))
        .param_gate(GateKind::RY, &[0], 2)
        .measure(MeasurementSpec::Expval(Observable::z(0)))
        .expect("static tape")
}

/// Runs a tape once and records the result as a zero-iteration trace.
pub fn execute_trace(
    experiment: &str,
    tape: &CircuitTape,
    device: &Device,
    params: &[f64],
    seed: u64,
) -> Result<Trace> {
    let result = tape.execute(device, params)?;
    let (cost, key) = match &result {
        crate::circuit::ExecutionResult::Expval(v) => (*v, "expval"),
        crate::circuit::ExecutionResult::ExpvalList(v) => (v.iter().sum(), "expvals"),
        crate::circuit::ExecutionResult::Probs(p) => (p.iter().sum(), "probs"),
    };
    let mut final_record = FinalRecord {
        cost,
        params: params.to_vec(),
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    final_record
        .extra
        .insert(key.to_string(), json!(result.into_vec()));
    Ok(Trace {
        experiment: experiment.to_string(),
        seed,
        config: TraceConfig {
            optimizer: None,
            diff_method: None,
            iterations: 0,
            restarts: 1,
            device: device.mode(),
        },
        iterations: vec![],
        final_record,
    })
}

/// Minimises `(⟨Z0⟩ − 1)²` on [`variational_tape`].
pub fn variational_descent(
    settings: &RunSettings,
    init: &[f64],
    device: &Device,
    seed: u64,
) -> Result<Trace> {
    let tape = variational_tape();
    let method = settings.method_for(device);
    let (iterations, params, cost) = optimize(settings, init.to_vec(), |p| {
        let f = tape.execute(device, p)?.as_scalar().expect("scalar tape");
        let g = gradient(method, &tape, device, p)?;
        let loss = (f - 1.0).powi(2);
        Ok(Evaluation {
            loss,
            grad: g.iter().map(|d| 2.0 * (f - 1.0) * d).collect(),
            reported: loss,
        })
    })?;
    Ok(Trace {
        experiment: "variational".into(),
        seed,
        config: settings.trace_config(device, 1),
        iterations,
        final_record: FinalRecord {
            cost,
            params,
            restart: None,
            restart_costs: vec![],
            extra: Default::default(),
        },
    })
}
