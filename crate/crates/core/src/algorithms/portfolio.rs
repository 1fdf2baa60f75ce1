//! Variational portfolio selection: weights read from single-qubit `⟨Z⟩`.

use std::f64::consts::TAU;

use rand::Rng;
use serde_json::json;

use super::{optimize, stream_rng, Evaluation, FinalRecord, RunSettings, Trace};
use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::{Error, Result};
use crate::gradients::vjp;
use crate::ops::{Gate, GateKind, Observable};
use crate::optimizers::OptimizerConfig;

const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioProblem {
    returns: Vec<Vec<f64>>,
    risk_aversion: f64,
    q: Vec<Vec<f64>>,
}

impl PortfolioProblem {
    pub fn new(returns: Vec<Vec<f64>>, risk_aversion: f64) -> Result<Self> {
        let n = returns.len();
        if n == 0 {
            return Err(Error::Validation("portfolio needs at least one asset".into()));
        }
        if let Some(i) = returns.iter().position(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "returns row {i} has {} entries, expected {n}",
                returns[i].len()
            )));
        }
        if !(risk_aversion >= 0.0 && risk_aversion.is_finite()) {
            return Err(Error::Validation(format!(
                "risk aversion must be non-negative, got {risk_aversion}"
            )));
        }
        let q = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { risk_aversion } else { 0.0 } - returns[i][j])
                    .collect()
            })
            .collect();
        Ok(PortfolioProblem {
            returns,
            risk_aversion,
            q,
        })
    }

    /// Four assets, `λ = 0.5`.
    pub fn reference() -> Self {
        Self::new(
            vec![
                vec![0.1, 0.05, 0.08, 0.12],
                vec![0.05, 0.1, 0.06, 0.09],
                vec![0.08, 0.06, 0.1, 0.07],
                vec![0.12, 0.09, 0.07, 0.11],
            ],
            0.5,
        )
        .expect("static inputs")
    }

    pub fn n_assets(&self) -> usize {
        self.returns.len()
    }

    pub fn returns(&self) -> &[Vec<f64>] {
        &self.returns
    }

    pub fn risk_aversion(&self) -> f64 {
        self.risk_aversion
    }

    /// `Q = λI − R`.
    pub fn q(&self) -> &[Vec<f64>] {
        &self.q
    }

    /// Diagonal of the returns matrix.
    pub fn expected_returns(&self) -> Vec<f64> {
        (0..self.n_assets()).map(|i| self.returns[i][i]).collect()
    }

    /// `wᵀQw`.
    pub fn risk(&self, w: &[f64]) -> f64 {
        w.iter()
            .zip(&self.q)
            .map(|(wi, row)| wi * row.iter().zip(w).map(|(q, wj)| q * wj).sum::<f64>())
            .sum()
    }

    /// `−(w·r − λ wᵀQw)`.
    pub fn cost(&self, w: &[f64]) -> f64 {
        let ret: f64 = w.iter().zip(self.expected_returns()).map(|(a, b)| a * b).sum();
        -(ret - self.risk_aversion * self.risk(w))
    }

    /// `∂cost/∂w`.
    fn cost_gradient(&self, w: &[f64]) -> Vec<f64> {
        let r = self.expected_returns();
        let n = self.n_assets();
        (0..n)
            .map(|i| {
                let sym: f64 = (0..n).map(|j| (self.q[i][j] + self.q[j][i]) * w[j]).sum();
                -(r[i] - self.risk_aversion * sym)
            })
            .collect()
    }

    /// `RY(θ_i)` on each wire, then a CNOT chain; measures every `⟨Z_i⟩`.
    pub fn tape(&self) -> Result<CircuitTape> {
        let n = self.n_assets();
        let mut b = CircuitTape::builder(n);
        for i in 0..n {
            b = b.param_gate(GateKind::RY, &[i], i);
        }
        b = b.gates((1..n).map(|i| Gate::cnot(i - 1, i)));
        b.measure(MeasurementSpec::ExpvalList((0..n).map(Observable::z).collect()))
    }

    /// Weights on the simplex from `⟨Z_i⟩` values.
    pub fn weights_from_expectations(z: &[f64]) -> Result<Vec<f64>> {
        let raw: Vec<f64> = z.iter().map(|z| (z + 1.0) / 2.0).collect();
        let total: f64 = raw.iter().sum();
        if total < DEGENERATE_TOL {
            return Err(Error::Degenerate(format!(
                "weights sum to {total:e}; every asset has <Z> near -1"
            )));
        }
        Ok(raw.iter().map(|w| w / total).collect())
    }

    pub fn weights(&self, device: &Device, params: &[f64]) -> Result<Vec<f64>> {
        let z = self.tape()?.execute(device, params)?.into_vec();
        Self::weights_from_expectations(&z)
    }
}

/// Adam, stepsize 0.1.
pub fn default_settings(iterations: usize) -> RunSettings {
    RunSettings::new(OptimizerConfig::adam(0.1).expect("positive"), iterations)
}

/// Minimises the portfolio cost from angles drawn uniformly in `[0, 2π)`.
pub fn portfolio_optimize(
    problem: &PortfolioProblem,
    settings: &RunSettings,
    device: &Device,
    seed: u64,
) -> Result<Trace> {
    let tape = problem.tape()?;
    let n = problem.n_assets();
    let mut rng = stream_rng(seed, "portfolio-init", 0);
    let init: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let method = settings.method_for(device);
    let (iterations, params, cost) = optimize(settings, init, |p| {
        let z = tape.execute(device, p)?.into_vec();
        let w = PortfolioProblem::weights_from_expectations(&z)?;
        let cost = problem.cost(&w);
        // w = w̃ / S with w̃ = (z + 1) / 2
        let g = problem.cost_gradient(&w);
        let s: f64 = z.iter().map(|z| (z + 1.0) / 2.0).sum();
        let gw: f64 = g.iter().zip(&w).map(|(a, b)| a * b).sum();
        let cotangent: Vec<f64> = g.iter().map(|gi| (gi - gw) / (2.0 * s)).collect();
        Ok(Evaluation {
            loss: cost,
            grad: vjp(method, &tape, device, p, &cotangent)?,
            reported: cost,
        })
    })?;
    let weights = problem.weights(device, &params)?;
    let mut final_record = FinalRecord {
        cost,
        params,
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    final_record.extra.insert("weights".into(), json!(weights));
    Ok(Trace {
        experiment: "portfolio".into(),
        seed,
        config: settings.trace_config(device, 1),
        iterations,
        final_record,
    })
}
