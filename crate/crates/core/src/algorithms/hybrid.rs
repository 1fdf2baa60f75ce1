//! Hybrid classifier: affine 8→4 layer, angle embedding, two entangling
//! layers, `⟨Z0⟩`, logistic output, binary cross-entropy.
//!
//! Parameters are one flat vector: `W` (4×8, row-major), then `b` (4), then
//! the entangler angles `θ` (2×4).

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde_json::json;

use super::{optimize, stream_rng, Evaluation, FinalRecord, RunSettings, Trace};
use crate::circuit::{CircuitTape, Device, MeasurementSpec, Operation, Param};
use crate::error::{Error, Result};
use crate::gradients::{gradient, DiffMethod};
use crate::ops::{Axis, Observable};
use crate::optimizers::OptimizerConfig;
use crate::templates::basic_entangler_ops;

pub const INPUTS: usize = 8;
pub const QUBITS: usize = 4;
pub const LAYERS: usize = 2;
pub const N_WEIGHTS: usize = QUBITS * INPUTS;
pub const N_PARAMS: usize = N_WEIGHTS + QUBITS + LAYERS * QUBITS;
/// Central-difference step for the quantum layer's input sensitivity.
pub const INPUT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: u8,
}

/// Quantum layer as a tape over `[a_0..a_3, θ_0..θ_7]`, where `a` is the
/// affine output fed to the angle embedding.
pub fn quantum_layer_tape() -> CircuitTape {
    let axis = Axis::default();
    let wires: Vec<usize> = (0..QUBITS).collect();
    let embed = (0..QUBITS).map(|i| Operation {
        kind: axis.rotation_kind(),
        wires: vec![i],
        param: Some(Param::r#ref(i)),
    });
    CircuitTape::builder(QUBITS)
        .ops(embed)
        .ops(basic_entangler_ops(LAYERS, &wires, axis, QUBITS))
        .measure(MeasurementSpec::Expval(Observable::z(0)))
        .expect("static tape")
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// BCE of `sigmoid(f)` against `y`, written in the overflow-safe softplus form.
fn bce_from_logit(f: f64, y: f64) -> f64 {
    let softplus = |t: f64| t.max(0.0) + (-t.abs()).exp().ln_1p();
    y * softplus(-f) + (1.0 - y) * softplus(f)
}

fn affine(params: &[f64], x: &[f64]) -> Vec<f64> {
    (0..QUBITS)
        .map(|r| {
            let row = &params[r * INPUTS..(r + 1) * INPUTS];
            row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + params[N_WEIGHTS + r]
        })
        .collect()
}

fn check(params: &[f64], data: &[Sample]) -> Result<()> {
    if params.len() != N_PARAMS {
        return Err(Error::Shape(format!(
            "hybrid model takes {N_PARAMS} parameters, got {}",
            params.len()
        )));
    }
    if data.is_empty() {
        return Err(Error::Validation("empty dataset".into()));
    }
    for (i, s) in data.iter().enumerate() {
        if s.features.len() != INPUTS {
            return Err(Error::Shape(format!(
                "row {i} has {} features, expected {INPUTS}",
                s.features.len()
            )));
        }
        if s.label > 1 {
            return Err(Error::Validation(format!("row {i} label {} is not 0 or 1", s.label)));
        }
    }
    Ok(())
}

fn layer_inputs(params: &[f64], x: &[f64]) -> Vec<f64> {
    let mut p = affine(params, x);
    p.extend_from_slice(&params[N_WEIGHTS + QUBITS..]);
    p
}

/// Predicted probability of label 1 for each row.
pub fn hybrid_predict(params: &[f64], data: &[Sample], device: &Device) -> Result<Vec<f64>> {
    check(params, data)?;
    let tape = quantum_layer_tape();
    data.par_iter()
        .map(|s| {
            let f = tape.execute(device, &layer_inputs(params, &s.features))?;
            Ok(sigmoid(f.as_scalar().expect("scalar tape")))
        })
        .collect()
}

/// Mean BCE over the dataset.
pub fn hybrid_loss(params: &[f64], data: &[Sample], device: &Device) -> Result<f64> {
    check(params, data)?;
    let tape = quantum_layer_tape();
    let terms: Vec<f64> = data
        .par_iter()
        .map(|s| {
            let f = tape.execute(device, &layer_inputs(params, &s.features))?;
            Ok(bce_from_logit(f.as_scalar().expect("scalar tape"), f64::from(s.label)))
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum::<f64>() / data.len() as f64)
}

/// Mean BCE and its gradient. Entangler angles use parameter shift; the
/// affine layer chains through central differences of the quantum layer in
/// its inputs.
pub fn hybrid_loss_and_grad(
    params: &[f64],
    data: &[Sample],
    device: &Device,
) -> Result<(f64, Vec<f64>)> {
    check(params, data)?;
    let tape = quantum_layer_tape();
    let n = data.len() as f64;
    let rows: Vec<(f64, Vec<f64>)> = data
        .par_iter()
        .map(|s| {
            let inputs = layer_inputs(params, &s.features);
            let eval = |p: &[f64]| -> Result<f64> {
                Ok(tape.execute(device, p)?.as_scalar().expect("scalar tape"))
            };
            let f = eval(&inputs)?;
            let y = f64::from(s.label);
            let dl_df = (sigmoid(f) - y) / n;
            let mut g = vec![0.0; N_PARAMS];
            let dq = gradient(DiffMethod::ParameterShift, &tape, device, &inputs)?;
            for (k, d) in dq[QUBITS..].iter().enumerate() {
                g[N_WEIGHTS + QUBITS + k] = dl_df * d;
            }
            for r in 0..QUBITS {
                let (mut up, mut down) = (inputs.clone(), inputs.clone());
                up[r] += INPUT_FD_STEP;
                down[r] -= INPUT_FD_STEP;
                let df_da = (eval(&up)? - eval(&down)?) / (2.0 * INPUT_FD_STEP);
                let da = dl_df * df_da;
                for (c, x) in s.features.iter().enumerate() {
                    g[r * INPUTS + c] = da * x;
                }
                g[N_WEIGHTS + r] = da;
            }
            Ok((bce_from_logit(f, y) / n, g))
        })
        .collect::<Result<_>>()?;
    let mut loss = 0.0;
    let mut grad = vec![0.0; N_PARAMS];
    for (l, g) in rows {
        loss += l;
        grad.iter_mut().zip(g).for_each(|(a, b)| *a += b);
    }
    Ok((loss, grad))
}

/// Seeded, linearly separable data: standard-normal features labelled by the
/// sign of their projection on a random direction.
pub fn synthetic_dataset(rows: usize, seed: u64) -> Vec<Sample> {
    let mut rng = stream_rng(seed, "hybrid-data", 0);
    let direction: Vec<f64> = (0..INPUTS).map(|_| rng.sample(StandardNormal)).collect();
    (0..rows)
        .map(|_| {
            let features: Vec<f64> = (0..INPUTS).map(|_| rng.sample(StandardNormal)).collect();
            let proj: f64 = features.iter().zip(&direction).map(|(a, b)| a * b).sum();
            Sample {
                features,
                label: u8::from(proj > 0.0),
            }
        })
        .collect()
}

/// Affine weights and biases uniform in `±1/√8`, entangler angles standard normal.
pub fn initial_params(seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, "hybrid-init", 0);
    let bound = 1.0 / (INPUTS as f64).sqrt();
    let mut p: Vec<f64> = (0..N_WEIGHTS + QUBITS)
        .map(|_| rng.gen_range(-bound..bound))
        .collect();
    p.extend((0..LAYERS * QUBITS).map(|_| rng.sample::<f64, _>(StandardNormal)));
    p
}

/// Adam, stepsize 0.01.
pub fn default_settings(epochs: usize) -> RunSettings {
    RunSettings::new(OptimizerConfig::adam(0.01).expect("positive"), epochs)
        .with_diff_method(DiffMethod::ParameterShift)
}

/// Full-batch training; one optimizer update per epoch.
pub fn hybrid_train(
    data: &[Sample],
    settings: &RunSettings,
    device: &Device,
    seed: u64,
) -> Result<Trace> {
    let init = initial_params(seed);
    check(&init, data)?;
    let (iterations, params, loss) = optimize(settings, init, |p| {
        let (loss, grad) = hybrid_loss_and_grad(p, data, device)?;
        Ok(Evaluation {
            loss,
            grad,
            reported: loss,
        })
    })?;
    let predictions = hybrid_predict(&params, data, device)?;
    let correct = predictions
        .iter()
        .zip(data)
        .filter(|(p, s)| u8::from(**p > 0.5) == s.label)
        .count();
    let mut final_record = FinalRecord {
        cost: loss,
        params,
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    final_record
        .extra
        .insert("accuracy".into(), json!(correct as f64 / data.len() as f64));
    let mut config = settings.trace_config(device, 1);
    config.diff_method = Some(DiffMethod::ParameterShift);
    Ok(Trace {
        experiment: "hybrid".into(),
        seed,
        config,
        iterations,
        final_record,
    })
}
