//! Bias-corrected Adam.

use serde::{Deserialize, Serialize};

use super::params::Parameters;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    /// Generator / discriminator setting: lr 2e-4, beta1 0.5.
    pub const ADVERSARIAL: AdamConfig = AdamConfig {
        lr: 2e-4,
        beta1: 0.5,
        beta2: 0.999,
        epsilon: 1e-8,
    };

    /// Classifier setting: lr 1e-3, beta1 0.9.
    pub const CLASSIFIER: AdamConfig = AdamConfig {
        lr: 1e-3,
        beta1: 0.9,
        beta2: 0.999,
        epsilon: 1e-8,
    };

    pub fn validate(&self) -> Result<()> {
        let ok = self.lr > 0.0
            && self.lr.is_finite()
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon > 0.0
            && self.epsilon.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "adam requires lr > 0, 0 <= beta1, beta2 < 1, epsilon > 0 (got {self:?})"
            )))
        }
    }
}

/// Moment accumulators for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    config: AdamConfig,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    step: u64,
}

impl AdamState {
    pub fn new(config: AdamConfig, shapes: &[usize]) -> Result<Self> {
        config.validate()?;
        Ok(AdamState {
            config,
            first: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            second: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            step: 0,
        })
    }

    pub fn for_params<P: Parameters + ?Sized>(config: AdamConfig, params: &P) -> Result<Self> {
        Self::new(config, &params.shapes())
    }

    pub fn config(&self) -> &AdamConfig {
        &self.config
    }

    /// Number of completed updates.
    pub fn t(&self) -> u64 {
        self.step
    }

    pub fn first_moments(&self) -> &[Vec<f64>] {
        &self.first
    }

    pub fn second_moments(&self) -> &[Vec<f64>] {
        &self.second
    }

    /// One Adam update. Gradients are validated first; a non-finite entry aborts the step and
    /// leaves both parameters and state untouched.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != self.first.len() || grads.len() != self.first.len() {
            return Err(Error::shape("adam_step tensors", self.first.len(), format!("{}/{}", params.len(), grads.len())));
        }
        for (i, ((p, g), m)) in params.iter().zip(grads).zip(&self.first).enumerate() {
            if p.len() != m.len() || g.len() != m.len() {
                return Err(Error::shape("adam_step tensor", m.len(), format!("tensor {i}: {}/{}", p.len(), g.len())));
            }
            if let Some((index, value)) = g.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(Error::NonFiniteGradient {
                    tensor: i,
                    index,
                    value: *value,
                });
            }
        }

        self.step += 1;
        let AdamConfig {
            lr,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let t = self.step as i32;
        let bias1 = 1.0 - beta1.powi(t);
        let bias2 = 1.0 - beta2.powi(t);
        for (((p, g), m), v) in params.iter_mut().zip(grads).zip(&mut self.first).zip(&mut self.second) {
            for i in 0..p.len() {
                let gi = g[i];
                m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
                v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
                let m_hat = m[i] / bias1;
                let v_hat = v[i] / bias2;
                p[i] -= lr * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        Ok(())
    }

    /// Update `params` from a gradient container of the same type.
    pub fn step_params<P: Parameters + ?Sized>(&mut self, params: &mut P, grads: &P) -> Result<()> {
        let g = grads.tensors();
        let mut p = params.tensors_mut();
        self.step(&mut p, &g)
    }
}
