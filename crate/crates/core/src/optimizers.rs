//! Gradient descent and Adam as pure step functions over explicit state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdConfig {
    pub stepsize: f64,
}

impl GdConfig {
    pub fn new(stepsize: f64) -> Result<Self> {
        let c = GdConfig { stepsize };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        positive("stepsize", self.stepsize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub stepsize: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    /// Standard moments: β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn new(stepsize: f64) -> Result<Self> {
        let c = AdamConfig {
            stepsize,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        positive("stepsize", self.stepsize)?;
        positive("epsilon", self.epsilon)?;
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::Validation(format!("{name} must lie in (0, 1), got {b}")));
            }
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} must be positive, got {v}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub step_count: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

fn same_len(params: &[f64], grad: &[f64]) -> Result<()> {
    if params.len() != grad.len() {
        return Err(Error::Shape(format!(
            "{} parameters but {} gradient entries",
            params.len(),
            grad.len()
        )));
    }
    Ok(())
}

/// `params - stepsize * grad`.
pub fn gd_step(config: &GdConfig, params: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
    same_len(params, grad)?;
    Ok(params
        .iter()
        .zip(grad)
        .map(|(p, g)| p - config.stepsize * g)
        .collect())
}

/// One bias-corrected Adam update. A fresh state (`step_count == 0`, empty
/// moments) is zero-initialised to the parameter length.
pub fn adam_step(
    config: &AdamConfig,
    state: &AdamState,
    params: &[f64],
    grad: &[f64],
) -> Result<(Vec<f64>, AdamState)> {
    same_len(params, grad)?;
    let mut next = state.clone();
    if next.step_count == 0 && next.m.is_empty() && next.v.is_empty() {
        next.m = vec![0.0; params.len()];
        next.v = vec![0.0; params.len()];
    }
    if next.m.len() != params.len() || next.v.len() != params.len() {
        return Err(Error::Shape(format!(
            "Adam moments have length {}/{}, parameters {}",
            next.m.len(),
            next.v.len(),
            params.len()
        )));
    }
    next.step_count += 1;
    let t = next.step_count as i32;
    let (b1, b2) = (config.beta1, config.beta2);
    let bias1 = 1.0 - b1.powi(t);
    let bias2 = 1.0 - b2.powi(t);
    let updated = params
        .iter()
        .zip(grad)
        .zip(next.m.iter_mut().zip(next.v.iter_mut()))
        .map(|((p, g), (m, v))| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            let m_hat = *m / bias1;
            let v_hat = *v / bias2;
            p - config.stepsize * m_hat / (v_hat.sqrt() + config.epsilon)
        })
        .collect();
    Ok((updated, next))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerConfig {
    Gd(GdConfig),
    Adam(AdamConfig),
}

impl OptimizerConfig {
    pub fn gd(stepsize: f64) -> Result<Self> {
        GdConfig::new(stepsize).map(OptimizerConfig::Gd)
    }

    pub fn adam(stepsize: f64) -> Result<Self> {
        AdamConfig::new(stepsize).map(OptimizerConfig::Adam)
    }

    pub fn stepsize(&self) -> f64 {
        match self {
            OptimizerConfig::Gd(c) => c.stepsize,
            OptimizerConfig::Adam(c) => c.stepsize,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OptimizerConfig::Gd(c) => c.validate(),
            OptimizerConfig::Adam(c) => c.validate(),
        }
    }

    pub fn start(&self) -> Optimizer {
        Optimizer {
            config: *self,
            adam: AdamState::default(),
        }
    }
}

/// Convenience holder pairing a config with its evolving state.
#[derive(Debug, Clone)]
pub struct Optimizer {
    config: OptimizerConfig,
    adam: AdamState,
}

impl Optimizer {
    pub fn step(&mut self, params: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
        match &self.config {
            OptimizerConfig::Gd(c) => gd_step(c, params, grad),
            OptimizerConfig::Adam(c) => {
                let (next, state) = adam_step(c, &self.adam, params, grad)?;
                self.adam = state;
                Ok(next)
            }
        }
    }

    pub fn config(&self) -> &OptimizerConfig {
        &self.config
    }
}
