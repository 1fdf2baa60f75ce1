//! Quantum kernel from the overlap of feature-map output distributions.

use rayon::prelude::*;
use serde_json::json;

use super::{FinalRecord, Trace, TraceConfig};
use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::{Error, Result};
use crate::ops::{Gate, GateKind};

pub const FEATURES: usize = 2;

/// `RY(x₁)⊗RY(x₂)`, `CNOT(0,1)`, `RY(x₁)⊗RY(x₂)`, measuring both wires.
pub fn feature_map_tape() -> CircuitTape {
    CircuitTape::builder(2)
        .param_gate(GateKind::RY, &[0], 0)
        .param_gate(GateKind::RY, &[1], 1)
        .gate(Gate::cnot(0, 1))
        .param_gate(GateKind::RY, &[0], 0)
        .param_gate(GateKind::RY, &[1], 1)
        .measure(MeasurementSpec::Probs(vec![0, 1]))
        .expect("static tape")
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelJob {
    pub x1: Vec<Vec<f64>>,
    pub x2: Vec<Vec<f64>>,
}

impl KernelJob {
    pub fn new(x1: Vec<Vec<f64>>, x2: Vec<Vec<f64>>) -> Result<Self> {
        check_rows(&x1)?;
        check_rows(&x2)?;
        Ok(KernelJob { x1, x2 })
    }

    /// Gram job `K(X, X)`.
    pub fn gram(x: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(x.clone(), x)
    }
}

fn check_rows(x: &[Vec<f64>]) -> Result<()> {
    match x.iter().position(|r| r.len() != FEATURES) {
        Some(i) => Err(Error::Shape(format!(
            "row {i} has {} features, expected {FEATURES}",
            x[i].len()
        ))),
        None => Ok(()),
    }
}

/// Output distribution of the feature map for each row.
pub fn feature_vectors(x: &[Vec<f64>], device: &Device) -> Result<Vec<Vec<f64>>> {
    check_rows(x)?;
    let tape = feature_map_tape();
    x.par_iter()
        .map(|row| Ok(tape.execute(device, row)?.into_vec()))
        .collect()
}

/// `K[i][j] = p(x1_i) · p(x2_j)`.
pub fn quantum_kernel_matrix(job: &KernelJob, device: &Device) -> Result<Vec<Vec<f64>>> {
    let p1 = feature_vectors(&job.x1, device)?;
    let p2 = if job.x1 == job.x2 {
        p1.clone()
    } else {
        feature_vectors(&job.x2, device)?
    };
    Ok(p1
        .iter()
        .map(|a| {
            p2.iter()
                .map(|b| a.iter().zip(b).map(|(u, v)| u * v).sum())
                .collect()
        })
        .collect())
}

/// Gram matrix wrapped in a zero-iteration trace; the cost is the mean entry.
pub fn kernel_trace(
    x: &[Vec<f64>],
    device: &Device,
    seed: u64,
) -> Result<(Trace, Vec<Vec<f64>>)> {
    let k = quantum_kernel_matrix(&KernelJob::gram(x.to_vec())?, device)?;
    let n = k.len();
    let mean = if n == 0 {
        0.0
    } else {
        k.iter().flatten().sum::<f64>() / (n * n) as f64
    };
    let mut final_record = FinalRecord {
        cost: mean,
        params: vec![],
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    final_record.extra.insert("n_samples".into(), json!(n));
    final_record.extra.insert(
        "diagonal".into(),
        json!((0..n).map(|i| k[i][i]).collect::<Vec<_>>()),
    );
    let trace = Trace {
        experiment: "kernel".into(),
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
    };
    Ok((trace, k))
}
