//! Variational experiments and their brute-force oracles.
//!
//! Every experiment produces a [`Trace`]: step 0 is the initial point and step
//! `t` the point after `t` optimizer updates.

pub mod basics;
pub mod eigen;
pub mod gradcheck;
pub mod hybrid;
pub mod kernel;
pub mod portfolio;
pub mod qaoa;
pub mod vqe;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Device, DeviceMode};
use crate::error::{Error, Result};
use crate::gradients::DiffMethod;
use crate::optimizers::OptimizerConfig;

pub use eigen::{exact_ground_energy, symmetric_eigenvalues};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub cost: f64,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diff_method: Option<DiffMethod>,
    pub iterations: usize,
    pub restarts: usize,
    pub device: DeviceMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalRecord {
    pub cost: f64,
    pub params: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub restart: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub restart_costs: Vec<f64>,
    /// Experiment-specific outputs (weights, oracle values, probabilities, …).
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub experiment: String,
    pub seed: u64,
    pub config: TraceConfig,
    pub iterations: Vec<TraceStep>,
    #[serde(rename = "final")]
    pub final_record: FinalRecord,
}

impl Trace {
    pub fn final_cost(&self) -> f64 {
        self.final_record.cost
    }

    pub fn costs(&self) -> impl Iterator<Item = f64> + '_ {
        self.iterations.iter().map(|s| s.cost)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One-line human summary, derived only from serialised fields.
    pub fn summary(&self) -> String {
        let f = &self.final_record;
        for key in ["probs", "expvals"] {
            if let Some(serde_json::Value::Array(p)) = f.extra.get(key) {
                let items: Vec<String> = p
                    .iter()
                    .map(|v| fmt_num(v.as_f64().unwrap_or(f64::NAN)))
                    .collect();
                return format!("{key} = [{}]", items.join(", "));
            }
        }
        let label = match self.experiment.as_str() {
            "bell" | "circuit" => "value",
            "vqe" => "energy",
            "qaoa" => "cut",
            "portfolio" => "cost",
            "hybrid" => "loss",
            "kernel" => "mean_kernel",
            "grad-check" => "max_discrepancy",
            _ => "cost",
        };
        let mut line = format!("{}: {label} = {}", self.experiment, fmt_num(f.cost));
        if let Some(r) = f.restart {
            line.push_str(&format!(
                " (restart {r} of {})",
                self.config.restarts.max(f.restart_costs.len())
            ));
        }
        line.push_str(&format!(", seed {}", self.seed));
        line
    }
}

/// Compact decimal: ten fractional digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() && x != 0.0 && x.abs() < 1e-9 {
        return format!("{x:e}");
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        s => s.to_string(),
    }
}

/// Deterministic RNG for a named substream of a master seed.
pub fn stream_rng(seed: u64, stream: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a; only needs to be stable, not strong.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h.wrapping_add(index));
    rng
}

/// Seed for restart `index`, drawn from the "restart" substream.
pub fn restart_seed(seed: u64, index: usize) -> u64 {
    use rand::RngCore;
    stream_rng(seed, "restart", index as u64).next_u64()
}

/// Shared knobs for the optimisation loops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub optimizer: OptimizerConfig,
    pub iterations: usize,
    pub diff_method: DiffMethod,
}

impl RunSettings {
    pub fn new(optimizer: OptimizerConfig, iterations: usize) -> Self {
        RunSettings {
            optimizer,
            iterations,
            diff_method: DiffMethod::Adjoint,
        }
    }

    pub fn with_diff_method(mut self, diff_method: DiffMethod) -> Self {
        self.diff_method = diff_method;
        self
    }

    /// Adjoint needs an analytic device; fall back to parameter shift otherwise.
    pub(crate) fn method_for(&self, device: &Device) -> DiffMethod {
        match self.diff_method {
            DiffMethod::Adjoint if !device.is_analytic() => DiffMethod::ParameterShift,
            m => m,
        }
    }

    pub(crate) fn trace_config(&self, device: &Device, restarts: usize) -> TraceConfig {
        TraceConfig {
            optimizer: Some(self.optimizer),
            diff_method: Some(self.method_for(device)),
            iterations: self.iterations,
            restarts,
            device: device.mode(),
        }
    }
}

/// One evaluation inside an optimisation loop.
pub(crate) struct Evaluation {
    /// Quantity being minimised.
    pub loss: f64,
    pub grad: Vec<f64>,
    /// Value recorded in the trace (e.g. the cut rather than its negation).
    pub reported: f64,
}

/// Runs `iterations` optimizer updates from `init`, recording every point.
pub(crate) fn optimize(
    settings: &RunSettings,
    init: Vec<f64>,
    mut evaluate: impl FnMut(&[f64]) -> Result<Evaluation>,
) -> Result<(Vec<TraceStep>, Vec<f64>, f64)> {
    settings.optimizer.validate()?;
    let mut opt = settings.optimizer.start();
    let mut params = init;
    let mut steps = Vec::with_capacity(settings.iterations + 1);
    for t in 0..=settings.iterations {
        let eval = evaluate(&params)?;
        if !eval.loss.is_finite() {
            return Err(Error::Internal(format!("non-finite loss at step {t}")));
        }
        steps.push(TraceStep {
            step: t,
            cost: eval.reported,
            params: params.clone(),
        });
        if t == settings.iterations {
            return Ok((steps, params, eval.reported));
        }
        params = opt.step(&params, &eval.grad)?;
    }
    unreachable!()
}

/// Best of `restarts` independent runs; restart `r` receives `restart_seed(seed, r)`.
/// Ties go to the lowest index.
pub(crate) fn best_of(
    restarts: usize,
    seed: u64,
    maximize: bool,
    run: impl Fn(u64) -> Result<Trace> + Sync,
) -> Result<Trace> {
    if restarts == 0 {
        return Err(Error::Validation("restarts must be at least 1".into()));
    }
    let traces: Vec<Trace> = (0..restarts)
        .into_par_iter()
        .map(|r| run(restart_seed(seed, r)))
        .collect::<Result<_>>()?;
    let costs: Vec<f64> = traces.iter().map(Trace::final_cost).collect();
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let best = (1..restarts).fold(0, |best, r| if better(costs[r], costs[best]) { r } else { best });
    let mut trace = traces.into_iter().nth(best).expect("nonempty");
    trace.seed = seed;
    trace.config.restarts = restarts;
    trace.final_record.restart = Some(best);
    trace.final_record.restart_costs = costs;
    Ok(trace)
}
