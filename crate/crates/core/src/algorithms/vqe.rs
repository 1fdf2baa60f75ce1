//! Variational eigensolver on a two-qubit hardware-efficient ansatz.

use std::f64::consts::TAU;

use rand::Rng;
use serde_json::json;

use super::{best_of, exact_ground_energy, optimize, stream_rng, Evaluation, FinalRecord, RunSettings, Trace};
use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::{Error, Result};
use crate::gradients::gradient;
use crate::matrix::CMatrix;
use crate::ops::{Gate, GateKind, Observable};
use crate::optimizers::OptimizerConfig;

/// Simplified two-qubit H2 Hamiltonian used throughout the examples.
pub fn h2_hamiltonian() -> Vec<Vec<f64>> {
    vec![
        vec![-1.05, 0.0, 0.0, 0.18],
        vec![0.0, -0.81, 0.18, 0.0],
        vec![0.0, 0.18, -0.81, 0.0],
        vec![0.18, 0.0, 0.0, -1.05],
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeProblem {
    hamiltonian: Vec<Vec<f64>>,
}

impl VqeProblem {
    /// `hamiltonian` must be a real symmetric 4×4 matrix.
    pub fn new(hamiltonian: Vec<Vec<f64>>) -> Result<Self> {
        if hamiltonian.len() != 4 || hamiltonian.iter().any(|r| r.len() != 4) {
            return Err(Error::Shape("VQE Hamiltonian must be 4x4".into()));
        }
        for i in 0..4 {
            for j in 0..i {
                if (hamiltonian[i][j] - hamiltonian[j][i]).abs() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "Hamiltonian is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(VqeProblem { hamiltonian })
    }

    pub fn h2() -> Self {
        Self::new(h2_hamiltonian()).expect("static matrix")
    }

    pub fn hamiltonian(&self) -> &[Vec<f64>] {
        &self.hamiltonian
    }

    /// `RY RY · CNOT · RY RY` with parameters `[θ0, θ1, θ2, θ3]`, measuring `⟨H⟩`.
    pub fn tape(&self) -> CircuitTape {
        let h = CMatrix::from_real_rows(&self.hamiltonian).expect("checked 4x4");
        CircuitTape::builder(2)
            .param_gate(GateKind::RY, &[0], 0)
            .param_gate(GateKind::RY, &[1], 1)
            .gate(Gate::cnot(0, 1))
            .param_gate(GateKind::RY, &[0], 2)
            .param_gate(GateKind::RY, &[1], 3)
            .measure(MeasurementSpec::Expval(
                Observable::hermitian(h, vec![0, 1]).expect("checked symmetric"),
            ))
            .expect("static tape")
    }
}

/// Gradient descent, stepsize 0.4.
pub fn default_settings(iterations: usize) -> RunSettings {
    RunSettings::new(OptimizerConfig::gd(0.4).expect("positive"), iterations)
}

/// One VQE run. Without `init`, angles are drawn uniformly from `[0, 2π)`.
pub fn vqe_run(
    problem: &VqeProblem,
    settings: &RunSettings,
    device: &Device,
    init: Option<&[f64]>,
    seed: u64,
) -> Result<Trace> {
    if settings.iterations == 0 {
        return Err(Error::Validation("VQE needs at least one iteration".into()));
    }
    let init = match init {
        Some(p) if p.len() == 4 => p.to_vec(),
        Some(p) => {
            return Err(Error::Shape(format!("VQE takes 4 parameters, got {}", p.len())))
        }
        None => {
            let mut rng = stream_rng(seed, "vqe-init", 0);
            (0..4).map(|_| rng.gen_range(0.0..TAU)).collect()
        }
    };
    let tape = problem.tape();
    let method = settings.method_for(device);
    let (iterations, params, energy) = optimize(settings, init, |p| {
        let e = tape.execute(device, p)?.as_scalar().expect("scalar tape");
        Ok(Evaluation {
            loss: e,
            grad: gradient(method, &tape, device, p)?,
            reported: e,
        })
    })?;
    let mut final_record = FinalRecord {
        cost: energy,
        params,
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    final_record.extra.insert(
        "exact_ground_energy".into(),
        json!(exact_ground_energy(&problem.hamiltonian)?),
    );
    Ok(Trace {
        experiment: "vqe".into(),
        seed,
        config: settings.trace_config(device, 1),
        iterations,
        final_record,
    })
}

/// Lowest final energy over `restarts` seeded runs.
pub fn vqe_best_of(
    problem: &VqeProblem,
    settings: &RunSettings,
    device: &Device,
    restarts: usize,
    seed: u64,
) -> Result<Trace> {
    best_of(restarts, seed, false, |s| vqe_run(problem, settings, device, None, s))
}
