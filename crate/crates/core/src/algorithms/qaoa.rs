//! QAOA for Max-Cut.

use std::f64::consts::PI;

use rand::Rng;
use serde_json::json;

use super::{best_of, optimize, stream_rng, Evaluation, FinalRecord, RunSettings, Trace};
use crate::circuit::{CircuitTape, Device, MeasurementSpec};
use crate::error::{Error, Result};
use crate::gradients::vjp;
use crate::ops::{Gate, GateKind, Observable};
use crate::optimizers::OptimizerConfig;

const BRUTEFORCE_MAX_NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutProblem {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    p: usize,
}

impl MaxCutProblem {
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>, p: usize) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::Validation("graph needs at least one node".into()));
        }
        if p == 0 {
            return Err(Error::Validation("QAOA depth p must be at least 1".into()));
        }
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::Validation(format!("self-loop on node {a}")));
            }
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) outside {n_nodes} nodes"
                )));
            }
        }
        Ok(MaxCutProblem { n_nodes, edges, p })
    }

    /// Four nodes, edges (0,1) (1,2) (2,3) (3,0) (0,2), depth 2.
    pub fn reference() -> Self {
        Self::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], 2).expect("static graph")
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_params(&self) -> usize {
        2 * self.p
    }

    /// Parameters are `[γ_0..γ_{p-1}, β_0..β_{p-1}]`; the tape measures every
    /// edge's `Z_i Z_j` in one execution.
    pub fn tape(&self) -> Result<CircuitTape> {
        let mut b = CircuitTape::builder(self.n_nodes).n_params(self.n_params());
        b = b.gates((0..self.n_nodes).map(Gate::h));
        for l in 0..self.p {
            for &(i, j) in &self.edges {
                b = b.scaled_param_gate(GateKind::IsingZZ, &[i, j], l, 2.0);
            }
            for w in 0..self.n_nodes {
                b = b.scaled_param_gate(GateKind::RX, &[w], self.p + l, 2.0);
            }
        }
        let obs = self
            .edges
            .iter()
            .map(|&(i, j)| Observable::zz(i, j))
            .collect::<Result<Vec<_>>>()?;
        b.measure(MeasurementSpec::ExpvalList(obs))
    }

    /// `Σ_edges ½(1 − ⟨Z_i Z_j⟩)`.
    pub fn cut_from_correlations(zz: &[f64]) -> f64 {
        zz.iter().map(|z| 0.5 * (1.0 - z)).sum()
    }

    pub fn cut_value(&self, device: &Device, params: &[f64]) -> Result<f64> {
        let zz = self.tape()?.execute(device, params)?.into_vec();
        Ok(Self::cut_from_correlations(&zz))
    }
}

/// Largest number of edges crossing any bipartition.
pub fn maxcut_bruteforce(problem: &MaxCutProblem) -> Result<usize> {
    if problem.n_nodes > BRUTEFORCE_MAX_NODES {
        return Err(Error::Capacity(format!(
            "brute force limited to {BRUTEFORCE_MAX_NODES} nodes, got {}",
            problem.n_nodes
        )));
    }
    Ok((0u32..1 << problem.n_nodes)
        .map(|mask| {
            problem
                .edges
                .iter()
                .filter(|&&(a, b)| (mask >> a & 1) != (mask >> b & 1))
                .count()
        })
        .max()
        .unwrap_or(0))
}

/// Adam, stepsize 0.1.
pub fn default_settings(iterations: usize) -> RunSettings {
    RunSettings::new(OptimizerConfig::adam(0.1).expect("positive"), iterations)
}

/// Maximises the cut expectation from angles drawn uniformly in `[0, π)`.
pub fn qaoa_maxcut(
    problem: &MaxCutProblem,
    settings: &RunSettings,
    device: &Device,
    seed: u64,
) -> Result<Trace> {
    let tape = problem.tape()?;
    let mut rng = stream_rng(seed, "qaoa-init", 0);
    let init: Vec<f64> = (0..problem.n_params()).map(|_| rng.gen_range(0.0..PI)).collect();
    let method = settings.method_for(device);
    // d(−C)/dθ = Σ_e ½ d⟨ZZ_e⟩/dθ
    let cotangent = vec![0.5; problem.edges.len()];
    let (iterations, params, cut) = optimize(settings, init, |p| {
        let zz = tape.execute(device, p)?.into_vec();
        let cut = MaxCutProblem::cut_from_correlations(&zz);
        Ok(Evaluation {
            loss: -cut,
            grad: vjp(method, &tape, device, p, &cotangent)?,
            reported: cut,
        })
    })?;
    let mut final_record = FinalRecord {
        cost: cut,
        params,
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    if problem.n_nodes <= BRUTEFORCE_MAX_NODES {
        final_record
            .extra
            .insert("max_cut".into(), json!(maxcut_bruteforce(problem)?));
    }
    Ok(Trace {
        experiment: "qaoa".into(),
        seed,
        config: settings.trace_config(device, 1),
        iterations,
        final_record,
    })
}

/// Highest final cut over `restarts` seeded runs.
pub fn qaoa_best_of(
    problem: &MaxCutProblem,
    settings: &RunSettings,
    device: &Device,
    restarts: usize,
    seed: u64,
) -> Result<Trace> {
    best_of(restarts, seed, true, |s| qaoa_maxcut(problem, settings, device, s))
}
